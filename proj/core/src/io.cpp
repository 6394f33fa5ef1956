#include "reslab/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace reslab {

using nlohmann::json;

namespace {

json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("JSON parse error in " + path + ": " + e.what());
    }
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("JSON parse error: ") + e.what());
    }
}

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw InputError(std::string("missing or non-numeric field '") + key + "'");
    return j[key].get<double>();
}

double optional_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw InputError(std::string("non-numeric field '") + key + "'");
    return j[key].get<double>();
}

Eigen::MatrixXcd matrix_from_json(const json& re, const json& im) {
    if (!re.is_array() || re.empty() || !re[0].is_array())
        throw InputError("coupling matrix: 're' must be a row-major array of arrays");
    const size_t n = re.size();
    Eigen::MatrixXcd U(n, n);
    for (size_t i = 0; i < n; ++i) {
        if (re[i].size() != n) throw InputError("coupling matrix must be square");
        for (size_t j = 0; j < n; ++j) {
            double x = re[i][j].get<double>();
            double y = 0.0;
            if (!im.is_null()) {
                if (!im.is_array() || im.size() != n || im[i].size() != n)
                    throw InputError("coupling matrix: 'im' shape must match 're'");
                y = im[i][j].get<double>();
            }
            U(i, j) = Complex(x, y);
        }
    }
    return U;
}

CouplingMatrix coupling_from_json(const json& spec, int degree) {
    if (!spec.contains("type") || !spec["type"].is_string())
        throw InputError("vertex coupling needs a 'type'");
    const std::string type = spec["type"].get<std::string>();
    if (type == "delta") return CouplingMatrix::delta(degree, require_number(spec, "alpha"));
    if (type == "delta_prime")
        return CouplingMatrix::delta_prime(degree, require_number(spec, "beta"));
    if (type == "kirchhoff") return CouplingMatrix::kirchhoff(degree);
    if (type == "anti_kirchhoff") return CouplingMatrix::anti_kirchhoff(degree);
    if (type == "dirichlet") return CouplingMatrix::dirichlet(degree);
    if (type == "matrix") {
        Eigen::MatrixXcd U =
            matrix_from_json(spec.value("re", json()), spec.value("im", json()));
        if (static_cast<int>(U.rows()) != degree)
            throw InputError("coupling matrix dimension " + std::to_string(U.rows()) +
                             " != vertex degree " + std::to_string(degree));
        return CouplingMatrix::from_matrix(std::move(U));
    }
    throw InputError("unknown coupling type '" + type + "'");
}

MetricGraph graph_from_json(const json& j) {
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw InputError("graph file needs a 'vertices' array");
    MetricGraph g;
    std::vector<json> coupling_specs;
    std::vector<std::string> ids;
    for (const auto& vj : j["vertices"]) {
        if (!vj.contains("id")) throw InputError("vertex needs an 'id'");
        ids.push_back(vj["id"].is_string() ? vj["id"].get<std::string>()
                                           : vj["id"].dump());
        if (!vj.contains("coupling")) throw InputError("vertex needs a 'coupling'");
        coupling_specs.push_back(vj["coupling"]);
    }
    auto index_of = [&](const json& ref) -> int {
        std::string key = ref.is_string() ? ref.get<std::string>() : ref.dump();
        for (size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == key) return static_cast<int>(i);
        throw InputError("unknown vertex reference '" + key + "'");
    };
    if (j.contains("edges"))
        for (const auto& ej : j["edges"]) {
            Edge e;
            e.from = index_of(ej.at("from"));
            e.to = index_of(ej.at("to"));
            e.length = require_number(ej, "length");
            e.flux = optional_number(ej, "flux", 0.0);
            g.edges.push_back(e);
        }
    if (j.contains("leads"))
        for (const auto& lj : j["leads"]) {
            Lead l;
            l.at = index_of(lj.at("at"));
            l.count = static_cast<int>(optional_number(lj, "count", 1));
            g.leads.push_back(l);
        }
    // couplings need the final degrees; build vertices last
    for (size_t i = 0; i < ids.size(); ++i)
        g.vertices.push_back({ids[i], CouplingMatrix::dirichlet(1)});
    for (size_t i = 0; i < ids.size(); ++i) {
        int deg = g.degree(static_cast<int>(i));
        if (deg == 0) throw InputError("vertex '" + ids[i] + "' is isolated");
        g.vertices[i].coupling = coupling_from_json(coupling_specs[i], deg);
    }
    g.validate();
    return g;
}

AnyModel model_from_json(const std::string& name, const json& j) {
    if (name == "friedrichs") {
        FriedrichsModel m;
        m.lambda0 = require_number(j, "lambda0");
        m.sigma = require_number(j, "sigma");
        m.g = require_number(j, "g");
        if (j.contains("poly")) m.poly = j["poly"].get<std::vector<double>>();
        m.validate();
        return m;
    }
    if (name == "twochannel") {
        TwoChannelModel m;
        m.a = require_number(j, "a");
        m.b = require_number(j, "b");
        m.c = Complex(optional_number(j, "c_re", 0.0), optional_number(j, "c_im", 0.0));
        if (j.contains("c")) m.c = Complex(require_number(j, "c"), 0.0);
        m.E = require_number(j, "E");
        m.validate();
        return m;
    }
    if (name == "winter") {
        WinterModel m;
        m.alpha = require_number(j, "alpha");
        m.R = require_number(j, "R");
        m.truncation = static_cast<int>(optional_number(j, "truncation", 200));
        m.validate();
        return m;
    }
    if (name == "stub") {
        StubModel m;
        m.l = require_number(j, "l");
        m.b = require_number(j, "b");
        m.c = optional_number(j, "c", 0.0);
        m.d = optional_number(j, "d", 0.0);
        m.validate();
        return m;
    }
    if (name == "lasso") {
        LassoModel m;
        m.L = require_number(j, "L");
        m.alpha = require_number(j, "alpha");
        m.mu = optional_number(j, "mu", 0.0);
        m.omega = optional_number(j, "omega", 1.0);
        m.phi = optional_number(j, "phi", 0.0);
        m.validate();
        return m;
    }
    if (name == "loop_two_leads") {
        LoopTwoLeadsModel m;
        std::string variant = j.value("variant", "delta");
        m.l = require_number(j, "l");
        if (variant == "delta") {
            m.variant = LoopTwoLeadsModel::Variant::delta;
            m.alpha = require_number(j, "alpha");
        } else if (variant == "magnetic") {
            m.variant = LoopTwoLeadsModel::Variant::magnetic;
            m.Phi = require_number(j, "Phi");
        } else if (variant == "general") {
            m.variant = LoopTwoLeadsModel::Variant::general;
            m.lambda = optional_number(j, "lambda", 0.0);
            for (int i = 0; i < 2; ++i) {
                std::string sfx = std::to_string(i + 1);
                m.inv_alpha[i] = require_number(j, ("inv_alpha" + sfx).c_str());
                m.inv_alpha_tilde[i] = require_number(j, ("inv_alpha_tilde" + sfx).c_str());
                m.gamma[i] = require_number(j, ("gamma" + sfx).c_str());
            }
        } else {
            throw InputError("loop_two_leads: unknown variant '" + variant + "'");
        }
        m.validate();
        return m;
    }
    if (name == "cross") {
        CrossModel m;
        m.l = require_number(j, "l");
        m.lambda = require_number(j, "lambda");
        m.alpha = require_number(j, "alpha");
        m.validate();
        return m;
    }
    if (name == "polygon") {
        PolygonModel m;
        m.n = static_cast<int>(require_number(j, "n"));
        m.l = require_number(j, "l");
        m.validate();
        return m;
    }
    throw InputError("unknown model '" + name + "'");
}

}  // namespace

MetricGraph load_graph(const std::string& path) { return graph_from_json(parse_json_file(path)); }
MetricGraph parse_graph(const std::string& text) { return graph_from_json(parse_json_text(text)); }

AnyModel load_model(const std::string& name, const std::string& params_path) {
    return model_from_json(name, parse_json_file(params_path));
}
AnyModel parse_model(const std::string& name, const std::string& text) {
    return model_from_json(name, parse_json_text(text));
}

void Table::add_row(std::initializer_list<std::string> cells) {
    rows.emplace_back(cells);
}

void Table::write_csv(std::ostream& os) const {
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
}

void Table::write_json(std::ostream& os) const {
    json j;
    j["columns"] = columns;
    j["rows"] = json::array();
    for (const auto& row : rows) j["rows"].push_back(row);
    json mj = json::object();
    for (const auto& [k, v] : meta) mj[k] = v;
    j["meta"] = mj;
    os << j.dump(2) << "\n";
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof probe, "%.*g", prec, x);
        double back = 0;
        std::sscanf(probe, "%lf", &back);
        if (back == x) return probe;
    }
    return buf;
}

std::string config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string version_string() {
#ifdef RESLAB_VERSION
    return RESLAB_VERSION;
#else
    return "0.0.0";
#endif
}

}  // namespace reslab
