// reslab: resonances, counting asymptotics, pole trajectories, decay laws and
// scattering tables for solvable models and metric graphs.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <variant>

#include "reslab/decay.hpp"
#include "reslab/io.hpp"
#include "reslab/secular.hpp"

using namespace reslab;

namespace {

struct CommonArgs {
    std::string graph_file;
    std::string model_name;
    std::string params_file;
    std::string out_file;
    std::string format = "csv";
    double re_min = 0.0, re_max = 30.0, im_min = -10.0, im_max = 0.5;
    double tol = 1e-10;
};

void add_io_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--graph", a.graph_file, "graph description file (JSON)");
    cmd->add_option("--model", a.model_name,
                    "model name: friedrichs|twochannel|winter|stub|lasso|loop_two_leads|cross|polygon");
    cmd->add_option("--params", a.params_file, "model parameter file (JSON)");
    cmd->add_option("--out", a.out_file, "output file (default stdout)");
    cmd->add_option("--format", a.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

void add_region_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--re-min", a.re_min, "region: min Re k");
    cmd->add_option("--re-max", a.re_max, "region: max Re k");
    cmd->add_option("--im-min", a.im_min, "region: min Im k");
    cmd->add_option("--im-max", a.im_max, "region: max Im k");
    cmd->add_option("--tol", a.tol, "root location tolerance");
}

void emit(const Table& table, const CommonArgs& a) {
    if (a.out_file.empty()) {
        if (a.format == "csv")
            table.write_csv(std::cout);
        else
            table.write_json(std::cout);
        return;
    }
    std::ofstream os(a.out_file, std::ios::binary);
    if (!os) throw InputError("cannot open output file: " + a.out_file);
    if (a.format == "csv")
        table.write_csv(os);
    else
        table.write_json(os);
}

std::string canonical_config(const std::string& cmd, const CommonArgs& a,
                             const std::string& extra = "") {
    std::string s = cmd + "|graph=" + a.graph_file + "|model=" + a.model_name +
                    "|params=" + a.params_file + "|re=" + format_double(a.re_min) + ":" +
                    format_double(a.re_max) + "|im=" + format_double(a.im_min) + ":" +
                    format_double(a.im_max) + "|tol=" + format_double(a.tol) + "|" + extra;
    return s;
}

void stamp(Table& t, const std::string& cmd, const CommonArgs& a, const std::string& extra = "") {
    t.meta.emplace_back("tool-version", version_string());
    t.meta.emplace_back("config-hash", config_hash(canonical_config(cmd, a, extra)));
}

AnalyticFn model_condition(const AnyModel& model) {
    return std::visit(
        [](const auto& m) -> AnalyticFn {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FriedrichsModel>) {
                throw InputError("friedrichs: use `scatter` or `resonances` (pole table)");
            } else if constexpr (std::is_same_v<T, TwoChannelModel>) {
                throw InputError("twochannel: poles come from the quartic; use `resonances`");
            } else if constexpr (std::is_same_v<T, WinterModel>) {
                return scaled([m](Complex k) { return winter_condition(m, k); });
            } else {
                return scaled([m](Complex k) { return m.condition(k); });
            }
        },
        model);
}

AnyModel load_model_checked(const CommonArgs& a) {
    if (a.model_name.empty() || a.params_file.empty())
        throw InputError("this command needs --model NAME --params FILE (or --graph)");
    return load_model(a.model_name, a.params_file);
}

double set_model_param(AnyModel& model, const std::string& name, double value) {
    auto fail = [&]() -> double {
        throw InputError("model has no sweep parameter '" + name + "'");
    };
    return std::visit(
        [&](auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, StubModel>) {
                if (name == "b") return m.b = value;
                if (name == "c") return m.c = value;
                if (name == "d") return m.d = value;
            } else if constexpr (std::is_same_v<T, LassoModel>) {
                if (name == "alpha") return m.alpha = value;
                if (name == "phi") return m.phi = value;
                if (name == "mu") return m.mu = value;
                if (name == "omega") return m.omega = value;
            } else if constexpr (std::is_same_v<T, LoopTwoLeadsModel>) {
                if (name == "lambda") return m.lambda = value;
                if (name == "alpha") return m.alpha = value;
                if (name == "Phi") return m.Phi = value;
            } else if constexpr (std::is_same_v<T, CrossModel>) {
                if (name == "lambda") return m.lambda = value;
                if (name == "alpha") return m.alpha = value;
            } else if constexpr (std::is_same_v<T, WinterModel>) {
                if (name == "alpha") return m.alpha = value;
            } else if constexpr (std::is_same_v<T, TwoChannelModel>) {
                if (name == "c") {
                    m.c = value;
                    return value;
                }
                if (name == "a") return m.a = value;
                if (name == "b") return m.b = value;
            } else if constexpr (std::is_same_v<T, FriedrichsModel>) {
                if (name == "g") return m.g = value;
            }
            return fail();
        },
        model);
}

// ---------------------------------------------------------------------------

int cmd_resonances(const CommonArgs& a) {
    Table t;
    t.columns = {"re_k", "im_k", "multiplicity", "residual"};
    Rect region{{a.re_min, a.im_min}, {a.re_max, a.im_max}};
    if (!(a.re_max > a.re_min) || !(a.im_max > a.im_min))
        throw InputError("resonance region is degenerate");
    if (!(a.tol > 0)) throw InputError("tolerance must be positive");

    std::vector<ComplexRoot> roots;
    if (!a.graph_file.empty()) {
        SecularFunction f(build_flower(load_graph(a.graph_file)));
        roots = find_roots([f](Complex k) { return f(k); }, region, a.tol);
    } else {
        AnyModel model = load_model_checked(a);
        if (std::holds_alternative<FriedrichsModel>(model)) {
            auto p = friedrichs_pole(std::get<FriedrichsModel>(model));
            roots.push_back(p.pole);
        } else if (std::holds_alternative<TwoChannelModel>(model)) {
            for (const auto& p : twochannel_poles(std::get<TwoChannelModel>(model))) {
                if (!region.contains(p.k)) continue;
                roots.push_back({p.k, 1, p.residual, 0.0, false});
            }
        } else {
            roots = find_roots(model_condition(model), region, a.tol);
        }
    }
    for (const auto& r : roots)
        t.add_row({format_double(r.k.real()), format_double(r.k.imag()),
                   std::to_string(r.multiplicity), format_double(r.residual)});
    stamp(t, "resonances", a);
    emit(t, a);
    return 0;
}

int cmd_count(const CommonArgs& a, const std::string& r_list) {
    std::vector<double> radii;
    {
        std::string item;
        std::stringstream ss(r_list);
        while (std::getline(ss, item, ','))
            if (!item.empty()) radii.push_back(std::stod(item));
    }
    if (radii.empty()) throw InputError("count: --r-list needs at least one radius");

    AnalyticFn f;
    if (!a.graph_file.empty()) {
        SecularFunction sf(build_flower(load_graph(a.graph_file)));
        f = [sf](Complex k) { return sf(k); };
    } else {
        AnyModel model = load_model_checked(a);
        f = model_condition(model);
    }
    CountingReport rep = counting_function(f, radii);
    Table t;
    t.columns = {"radius", "count"};
    for (size_t i = 0; i < rep.radii.size(); ++i)
        t.add_row({format_double(rep.radii[i]), std::to_string(rep.counts[i])});
    t.meta.emplace_back("fitted-slope", format_double(rep.fitted_slope));
    t.meta.emplace_back("fitted-w", format_double(rep.fitted_w));
    t.meta.emplace_back("fit-residual", format_double(rep.fit_residual));
    stamp(t, "count", a, "rlist=" + r_list);
    emit(t, a);
    return 0;
}

int cmd_trajectory(const CommonArgs& a, const std::string& param, double from, double to,
                   int steps, double seed_re, double seed_im, bool have_seed, int embed_n) {
    if (steps < 1) throw InputError("trajectory: --steps must be >= 1");
    AnyModel model = load_model_checked(a);

    Complex k0;
    if (have_seed) {
        k0 = {seed_re, seed_im};
    } else {
        // auto-seed from an embedded eigenvalue of the starting configuration
        set_model_param(model, param, from);
        if (std::holds_alternative<LoopTwoLeadsModel>(model))
            k0 = embed_n * kPi / std::get<LoopTwoLeadsModel>(model).l;
        else if (std::holds_alternative<CrossModel>(model))
            k0 = embed_n * kPi / std::get<CrossModel>(model).l;
        else if (std::holds_alternative<StubModel>(model))
            k0 = embed_n * kPi / std::get<StubModel>(model).l;
        else if (std::holds_alternative<LassoModel>(model))
            k0 = embed_n * kPi / std::get<LassoModel>(model).L;
        else
            throw InputError("trajectory: this model needs --seed-re/--seed-im");
    }

    Table t;
    t.columns = {"param", "re_k", "im_k", "flag"};
    Complex k = k0;
    std::vector<double> step_sizes;
    bool lost = false;
    for (int s = 0; s <= steps; ++s) {
        double value = from + (to - from) * double(s) / steps;
        set_model_param(model, param, value);
        AnalyticFn f = model_condition(model);
        auto polished = newton_polish(f, k, std::max(a.tol, 1e-12));
        if (!polished) {
            lost = true;
            break;
        }
        std::string flag = "ok";
        if (s > 0) {
            double jump = std::abs(*polished - k);
            step_sizes.push_back(jump);
            std::vector<double> sorted = step_sizes;
            std::sort(sorted.begin(), sorted.end());
            double median = sorted[sorted.size() / 2];
            if (sorted.size() >= 4 && jump > 10.0 * median && jump > 1e-9) flag = "jump";
        }
        k = *polished;
        t.add_row({format_double(value), format_double(k.real()), format_double(k.imag()), flag});
    }
    stamp(t, "trajectory", a,
          "param=" + param + "|from=" + format_double(from) + "|to=" + format_double(to) +
              "|steps=" + std::to_string(steps));
    if (lost) t.meta.emplace_back("warning", "track lost; table truncated");
    emit(t, a);
    if (lost) {
        std::cerr << "warning: lost the root track; partial table written\n";
        return 4;
    }
    return 0;
}

int cmd_decay(const CommonArgs& a, double tmax, int terms, int t_steps, double window) {
    AnyModel model = load_model_checked(a);
    if (!(tmax > 0)) throw InputError("decay: --tmax must be > 0");
    if (t_steps < 2) throw InputError("decay: --t-steps must be >= 2");
    std::vector<double> times(t_steps + 1);
    for (int i = 0; i <= t_steps; ++i) times[i] = tmax * double(i) / t_steps;

    DecayLawSamples samples;
    if (std::holds_alternative<WinterModel>(model)) {
        WinterModel m = std::get<WinterModel>(model);
        if (terms > 0) m.truncation = terms;
        samples = winter_decay_law(m, times);
    } else if (std::holds_alternative<TwoChannelModel>(model)) {
        samples = twochannel_decay_law(std::get<TwoChannelModel>(model), times);
    } else {
        throw InputError("decay: supported models are winter and twochannel");
    }

    Table t;
    t.columns = {"t", "P", "err", "method"};
    std::vector<double> smoothed;
    size_t smooth_from = 0;
    if (window > 0) {
        auto sl = smoothed_log_derivative(samples, window);
        t.columns.push_back("smoothed_dlnP");
        smoothed.resize(samples.times.size(), std::numeric_limits<double>::quiet_NaN());
        for (const auto& [ts, val] : sl)
            for (size_t i = smooth_from; i < samples.times.size(); ++i)
                if (samples.times[i] == ts) {
                    smoothed[i] = val;
                    smooth_from = i + 1;
                    break;
                }
    }
    for (size_t i = 0; i < samples.times.size(); ++i) {
        std::vector<std::string> row = {format_double(samples.times[i]),
                                        format_double(samples.values[i]),
                                        format_double(samples.errors[i]), samples.method};
        if (window > 0)
            row.push_back(std::isnan(smoothed[i]) ? "" : format_double(smoothed[i]));
        t.rows.push_back(std::move(row));
    }
    if (samples.truncation_warning)
        t.meta.emplace_back("warning", "truncation estimate exceeds tolerance");
    stamp(t, "decay", a,
          "tmax=" + format_double(tmax) + "|terms=" + std::to_string(terms) +
              "|steps=" + std::to_string(t_steps) + "|window=" + format_double(window));
    emit(t, a);
    return 0;
}

int cmd_scatter(const CommonArgs& a, int steps) {
    AnyModel model = load_model_checked(a);
    if (steps < 1) throw InputError("scatter: --steps must be >= 1");
    if (!(a.re_max > a.re_min) || !(a.re_min >= 0))
        throw InputError("scatter: need 0 <= re-min < re-max");
    Table t;
    if (std::holds_alternative<FriedrichsModel>(model)) {
        const auto& m = std::get<FriedrichsModel>(model);
        t.columns = {"lambda", "re_S", "im_S", "abs_S"};
        for (int i = 0; i <= steps; ++i) {
            double lam = a.re_min + (a.re_max - a.re_min) * double(i) / steps;
            if (lam <= 0) continue;
            Complex S = friedrichs_smatrix(m, lam);
            t.add_row({format_double(lam), format_double(S.real()), format_double(S.imag()),
                       format_double(std::abs(S))});
        }
    } else if (std::holds_alternative<TwoChannelModel>(model)) {
        const auto& m = std::get<TwoChannelModel>(model);
        t.columns = {"k", "re_A", "im_A", "re_B", "im_B", "unitarity_defect"};
        for (int i = 0; i <= steps; ++i) {
            double k = a.re_min + (a.re_max - a.re_min) * double(i) / steps;
            if (k <= 0) continue;
            auto amp = twochannel_smatrix(m, k);
            double defect;
            if (k * k <= m.E) {
                defect = std::abs(std::abs(amp.reflection) - 1.0);
            } else {
                double kappa = std::sqrt(k * k - m.E);
                defect = std::abs(std::norm(amp.reflection) +
                                  kappa / k * std::norm(amp.transmission) - 1.0);
            }
            t.add_row({format_double(k), format_double(amp.reflection.real()),
                       format_double(amp.reflection.imag()), format_double(amp.transmission.real()),
                       format_double(amp.transmission.imag()), format_double(defect)});
        }
    } else {
        throw InputError("scatter: supported models are friedrichs and twochannel");
    }
    stamp(t, "scatter", a, "steps=" + std::to_string(steps));
    emit(t, a);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonances and decays of solvable quantum models"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string r_list;
    std::string sweep_param;
    double sweep_from = 0.0, sweep_to = 1.0;
    int steps = 100;
    double seed_re = 0.0, seed_im = 0.0;
    int embed_n = 2;
    double tmax = 1.0, window = 0.0;
    int terms = 0, t_steps = 512;

    auto* res = app.add_subcommand("resonances", "locate resonance poles in a region");
    add_io_flags(res, args);
    add_region_flags(res, args);

    auto* cnt = app.add_subcommand("count", "counting function N(R) and effective size");
    add_io_flags(cnt, args);
    cnt->add_option("--r-list", r_list, "comma-separated ascending radii")->required();

    auto* traj = app.add_subcommand("trajectory", "pole continuation over a model parameter");
    add_io_flags(traj, args);
    add_region_flags(traj, args);
    traj->add_option("--param", sweep_param, "parameter name")->required();
    traj->add_option("--from", sweep_from, "start value")->required();
    traj->add_option("--to", sweep_to, "end value")->required();
    traj->add_option("--steps", steps, "number of continuation steps");
    auto* sre = traj->add_option("--seed-re", seed_re, "seed root, real part");
    traj->add_option("--seed-im", seed_im, "seed root, imaginary part");
    traj->add_option("--n", embed_n, "embedded-eigenvalue index for auto-seeding");

    auto* dec = app.add_subcommand("decay", "survival probability P(t)");
    add_io_flags(dec, args);
    dec->add_option("--tmax", tmax, "time horizon")->required();
    dec->add_option("--terms", terms, "truncation override (winter)");
    dec->add_option("--t-steps", t_steps, "number of grid intervals");
    dec->add_option("--window", window, "smoothing window for the log-derivative column");

    auto* sca = app.add_subcommand("scatter", "S-matrix table over a real-k grid");
    add_io_flags(sca, args);
    add_region_flags(sca, args);
    sca->add_option("--steps", steps, "number of grid intervals");

    CLI11_PARSE(app, argc, argv);

    try {
        if (res->parsed()) return cmd_resonances(args);
        if (cnt->parsed()) return cmd_count(args, r_list);
        if (traj->parsed())
            return cmd_trajectory(args, sweep_param, sweep_from, sweep_to, steps, seed_re,
                                  seed_im, sre->count() > 0, embed_n);
        if (dec->parsed()) return cmd_decay(args, tmax, terms, t_steps, window);
        if (sca->parsed()) return cmd_scatter(args, steps);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
