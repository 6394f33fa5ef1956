#include "reslab/rootfind.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace reslab {

AnalyticFn scaled(std::function<Complex(Complex)> f) {
    return [f = std::move(f)](Complex z) { return ScaledComplex::from(f(z)); };
}

int worker_threads() {
    if (const char* env = std::getenv("RESLAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return std::min(n, 64);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min<unsigned>(hw, 16);
}

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> pool;
    int nt = std::min(threads, n);
    pool.reserve(nt - 1);
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

struct BoundaryZero {};  // internal signal: the contour runs through a zero

// Unwrapped phase increment along [za, zb].  A step is accepted only when its
// midpoint confirms it: endpoint phases alone can alias a full turn past a
// symmetric zero pair hugging the segment, with no trace in either endpoint
// phase or magnitude.  Steps are refined until the increment is < pi/2, the
// magnitude locally resolved, and the two halves reproduce the whole.
double phase_sweep(const AnalyticFn& f, Complex za, Complex zb, ScaledComplex fa,
                   ScaledComplex fb, const WindingOptions& opts, int depth, Complex* moment) {
    if (fa.is_zero() || fb.is_zero()) throw BoundaryZero{};
    double d = std::arg(fb.phase / fa.phase);
    const bool plausible =
        std::abs(d) < kPi / 2 && std::abs(fb.log_mag - fa.log_mag) < 1.2;
    if (depth >= opts.max_refine_depth) {
        if (plausible) return d;  // deepest level: accept the principal value
        throw BoundaryZero{};
    }
    if (opts.evaluation_budget && --*opts.evaluation_budget < 0)
        throw NumericError("winding: evaluation budget exhausted");
    Complex zm = 0.5 * (za + zb);
    ScaledComplex fm = f(zm);
    if (plausible && !fm.is_zero()) {
        double dl = std::arg(fm.phase / fa.phase);
        double dr = std::arg(fb.phase / fm.phase);
        if (std::abs(dl) < kPi / 2 && std::abs(dr) < kPi / 2 &&
            std::abs(dl + dr - d) < 1e-9) {
            if (moment) {
                *moment += 0.5 * (za + zm) * Complex(fm.log_mag - fa.log_mag, dl);
                *moment += 0.5 * (zm + zb) * Complex(fb.log_mag - fm.log_mag, dr);
            }
            return d;
        }
    }
    return phase_sweep(f, za, zm, fa, fm, opts, depth + 1, moment) +
           phase_sweep(f, zm, zb, fm, fb, opts, depth + 1, moment);
}

// Winding along a closed polygonal contour (ccw vertices).
int contour_winding(const AnalyticFn& f, const std::vector<Complex>& vertices,
                    const WindingOptions& opts, Complex* moment = nullptr) {
    const size_t n = vertices.size();
    std::vector<ScaledComplex> vals(n);
    for (size_t i = 0; i < n; ++i) {
        vals[i] = f(vertices[i]);
        if (opts.evaluation_budget && --*opts.evaluation_budget < 0)
            throw NumericError("winding: evaluation budget exhausted");
    }
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        size_t j = (i + 1) % n;
        total += phase_sweep(f, vertices[i], vertices[j], vals[i], vals[j], opts, 0, moment);
    }
    double w = total / (2 * kPi);
    long rounded = std::lround(w);
    if (std::abs(w - double(rounded)) > 0.25)
        throw NumericError("winding: unwrapped phase is not an integer multiple of 2 pi");
    return static_cast<int>(rounded);
}

std::vector<Complex> rect_vertices(const Rect& r, const WindingOptions& opts) {
    std::vector<Complex> v;
    auto push_edge = [&](Complex a, Complex b) {
        int n = std::max<int>(opts.initial_samples_per_edge,
                              int(std::abs(b - a) * opts.samples_per_unit) + 1);
        for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * (double(i) / n));
    };
    Complex c1 = r.lo, c2 = {r.hi.real(), r.lo.imag()}, c3 = r.hi, c4 = {r.lo.real(), r.hi.imag()};
    push_edge(c1, c2);
    push_edge(c2, c3);
    push_edge(c3, c4);
    push_edge(c4, c1);
    return v;
}

int rect_winding_plain(const AnalyticFn& f, const Rect& r, const WindingOptions& opts) {
    return contour_winding(f, rect_vertices(r, opts), opts);
}

int rect_winding_with_dilation(const AnalyticFn& f, Rect rect, const WindingOptions& opts,
                               Rect* used = nullptr) {
    Rect r = rect;
    for (int attempt = 0;; ++attempt) {
        try {
            int w = rect_winding_plain(f, r, opts);
            if (used) *used = r;
            return w;
        } catch (const BoundaryZero&) {
            if (attempt >= opts.max_dilations)
                throw NumericError("winding: zero pinned to the boundary after dilations near (" +
                                   std::to_string(r.center().real()) + ", " +
                                   std::to_string(r.center().imag()) + ")");
            Complex c = r.center();
            double grow = 1.0 + 1e-4 * (attempt + 1);
            r = Rect{c + (r.lo - c) * grow, c + (r.hi - c) * grow};
        }
    }
}

}  // namespace

int winding_count(const AnalyticFn& f, Rect rect, const WindingOptions& opts) {
    return rect_winding_with_dilation(f, rect, opts);
}

int disc_winding(const AnalyticFn& f, double radius, const WindingOptions& opts, double depth) {
    double r = radius;
    double d = depth;
    for (int attempt = 0;; ++attempt) {
        std::vector<Complex> v;
        const double per_unit = std::max(1.0, opts.samples_per_unit);
        if (d >= r) {
            int nv = std::max(64, int(2 * kPi * r * per_unit));
            v.reserve(nv);
            for (int i = 0; i < nv; ++i) {
                double th = 2 * kPi * i / nv;
                v.push_back(Complex(r * std::cos(th), r * std::sin(th)));
            }
        } else {
            // boundary of {|k| < r} intersected with {|Im k| <= d}
            double x = std::sqrt(r * r - d * d);
            double thc = std::asin(d / r);
            auto arc = [&](double th0, double th1) {
                int na = std::max(16, int(r * std::abs(th1 - th0) * per_unit));
                for (int i = 0; i < na; ++i) {
                    double th = th0 + (th1 - th0) * double(i) / na;
                    v.push_back(Complex(r * std::cos(th), r * std::sin(th)));
                }
            };
            auto chord = [&](Complex a, Complex b) {
                int nc = std::max(16, int(std::abs(b - a) * per_unit));
                for (int i = 0; i < nc; ++i) v.push_back(a + (b - a) * (double(i) / nc));
            };
            arc(-thc, thc);                                  // right arc through (r, 0)
            chord(Complex(x, d), Complex(-x, d));            // top chord
            arc(kPi - thc, kPi + thc);                       // left arc through (-r, 0)
            chord(Complex(-x, -d), Complex(x, -d));          // bottom chord
        }
        try {
            return contour_winding(f, v, opts);
        } catch (const BoundaryZero&) {
            if (attempt >= opts.max_dilations)
                throw NumericError("disc winding: zero pinned to the contour at R = " +
                                   std::to_string(radius));
            r *= 1.0 + 1e-4;
            d *= 1.0 + 5e-5;
        }
    }
}

Complex contour_zero_mean(const AnalyticFn& f, Complex center, double radius, int winding) {
    (void)winding;
    WindingOptions opts;
    for (int attempt = 0;; ++attempt) {
        const int nv = 512;
        std::vector<Complex> v;
        v.reserve(nv);
        for (int i = 0; i < nv; ++i) {
            double th = 2 * kPi * i / nv;
            v.push_back(center + radius * Complex(std::cos(th), std::sin(th)));
        }
        try {
            Complex moment = 0.0;
            int w = contour_winding(f, v, opts, &moment);
            if (w == 0) return center;
            // accumulated sum of z d(log f) = 2 pi i * (sum of enclosed zeros)
            return moment / Complex(0, 2 * kPi) / double(w);
        } catch (const BoundaryZero&) {
            if (attempt >= 8) throw NumericError("contour_zero_mean: zero on probe circle");
            radius *= 1.13;
        }
    }
}

std::optional<Complex> newton_polish(const AnalyticFn& f, Complex seed, double tol,
                                     double* residual) {
    Complex z = seed;
    double scale = std::max(1.0, std::abs(z));
    for (int it = 0; it < 40; ++it) {
        double h = 1e-6 * scale;
        ScaledComplex fm = f(z - h), f0 = f(z), fp = f(z + h);
        if (f0.is_zero()) {
            if (residual) *residual = 0.0;
            return z;
        }
        double m = std::max({fm.log_mag, f0.log_mag, fp.log_mag});
        Complex vm = fm.is_zero() ? Complex(0) : fm.phase * std::exp(fm.log_mag - m);
        Complex v0 = f0.phase * std::exp(f0.log_mag - m);
        Complex vp = fp.is_zero() ? Complex(0) : fp.phase * std::exp(fp.log_mag - m);
        Complex deriv = (vp - vm) / (2 * h);
        if (std::abs(deriv) == 0.0) return std::nullopt;
        Complex step = v0 / deriv;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
        if (std::abs(step) < tol) {
            if (residual) *residual = std::abs(step);
            return z;
        }
    }
    return std::nullopt;
}

namespace {

struct Cell {
    Rect rect;
    int winding;
};

// Quadrise so the children tile the cell exactly; a zero sitting on a cut
// line is dodged by jittering the cut point, keeping winding conservation exact.
std::vector<Cell> quadrise(const AnalyticFn& f, const Cell& cell, const WindingOptions& opts) {
    Complex c0 = cell.rect.center();
    int last_sum = -1;
    for (int attempt = 0; attempt < 6; ++attempt) {
        Complex c = c0 + double(attempt) * Complex(0.013 * cell.rect.width(),
                                                   0.0177 * cell.rect.height());
        Rect quads[4] = {{cell.rect.lo, c},
                         {{c.real(), cell.rect.lo.imag()}, {cell.rect.hi.real(), c.imag()}},
                         {{cell.rect.lo.real(), c.imag()}, {c.real(), cell.rect.hi.imag()}},
                         {c, cell.rect.hi}};
        try {
            std::vector<Cell> kids;
            int sum = 0;
            for (const Rect& q : quads) {
                int wq = rect_winding_plain(f, q, opts);
                sum += wq;
                if (wq > 0) kids.push_back({q, wq});
            }
            if (sum != cell.winding) {  // a zero is hugging a cut line; jitter and retry
                last_sum = sum;
                continue;
            }
            return kids;
        } catch (const BoundaryZero&) {
            continue;
        }
    }
    throw NumericError("find_roots: winding not conserved under subdivision (last sum " +
                       std::to_string(last_sum) + " vs " + std::to_string(cell.winding) + ")");
}

}  // namespace

std::vector<ComplexRoot> find_roots(const AnalyticFn& f, Rect region,
                                    const FindRootsOptions& opts) {
    if (!(region.width() > 0) || !(region.height() > 0))
        throw InputError("find_roots: region is degenerate");
    long budget = opts.max_evaluations;
    WindingOptions wopts;
    wopts.evaluation_budget = &budget;
    const int nthreads = opts.threads > 0 ? opts.threads : worker_threads();
    const double tol = opts.tol;
    const double scale = std::max({1.0, std::abs(region.lo), std::abs(region.hi)});

    Rect used;
    int total = rect_winding_with_dilation(f, region, wopts, &used);
    std::vector<ComplexRoot> roots;
    if (total == 0) return roots;

    std::vector<Cell> active{{used, total}};
    const double cluster_stop = std::max(tol * 16.0, 1e-7 * scale);

    while (!active.empty()) {
        std::vector<std::vector<Cell>> produced(active.size());
        std::vector<std::vector<ComplexRoot>> found(active.size());
        std::exception_ptr error;
        std::mutex error_mutex;

        parallel_for(static_cast<int>(active.size()), nthreads, [&](int idx) {
            try {
                const Cell& cell = active[idx];
                const double w = std::max(cell.rect.width(), cell.rect.height());
                if (cell.winding == 1) {
                    // accept a polished root only inside this cell (tight slack) and
                    // the searched region; otherwise keep subdividing
                    double residual = 0.0;
                    auto polished = newton_polish(f, cell.rect.center(), tol * 0.01, &residual);
                    if (polished && cell.rect.contains(*polished, 0.02 * w) &&
                        used.contains(*polished, tol)) {
                        found[idx].push_back({*polished, 1, residual,
                                              std::max(residual * 10, tol), false});
                        return;
                    }
                    if (w <= cluster_stop) {
                        Complex zm = contour_zero_mean(f, cell.rect.center(), 0.75 * w, 1);
                        auto again = newton_polish(f, zm, tol * 0.01, &residual);
                        Complex loc = (again && std::abs(*again - zm) <= 2.0 * w) ? *again : zm;
                        double res = (again && loc == *again) ? residual : w;
                        found[idx].push_back({loc, 1, res, std::max(res * 10, tol), false});
                        return;
                    }
                } else if (cell.winding >= 2 && w <= cluster_stop) {
                    Complex zm = contour_zero_mean(f, cell.rect.center(), 1.5 * w, cell.winding);
                    double probe_r = std::max(64.0 * tol, 1e-9 * scale);
                    int probe_w = -1;
                    try {
                        std::vector<Complex> circle;
                        for (int i = 0; i < 64; ++i) {
                            double th = 2 * kPi * i / 64;
                            circle.push_back(zm + probe_r * Complex(std::cos(th), std::sin(th)));
                        }
                        probe_w = contour_winding(f, circle, wopts);
                    } catch (...) {
                        probe_w = -1;
                    }
                    ComplexRoot r;
                    r.k = zm;
                    r.multiplicity = cell.winding;
                    if (probe_w == cell.winding) {  // coincident multiple zero
                        r.residual = probe_r;
                        r.enclosure = probe_r;
                    } else {  // closely spaced distinct zeros: joint enclosure
                        r.residual = w;
                        r.enclosure = w;
                    }
                    found[idx].push_back(r);
                    return;
                }
                produced[idx] = quadrise(f, cell, wopts);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
        if (error) std::rethrow_exception(error);

        std::vector<Cell> next;
        for (auto& v : found)
            for (auto& r : v) roots.push_back(r);
        for (auto& v : produced)
            for (auto& c : v) next.push_back(c);
        active = std::move(next);
    }

    int sum_mult = 0;
    for (auto& r : roots) {
        sum_mult += r.multiplicity;
        r.near_imaginary_axis = std::abs(r.k.real()) <= std::max(tol * 100, 1e-9 * scale);
    }
    if (sum_mult != total)
        throw NumericError("find_roots: total multiplicity " + std::to_string(sum_mult) +
                           " != region winding " + std::to_string(total));
    std::sort(roots.begin(), roots.end(), [](const ComplexRoot& a, const ComplexRoot& b) {
        if (a.k.real() != b.k.real()) return a.k.real() < b.k.real();
        return a.k.imag() < b.k.imag();
    });
    return roots;
}

bool CountingReport::counts_nondecreasing() const {
    for (size_t i = 1; i < counts.size(); ++i)
        if (counts[i] < counts[i - 1]) return false;
    return true;
}

CountingReport counting_function(const AnalyticFn& f, const std::vector<double>& radii,
                                 const WindingOptions& opts, double initial_depth) {
    if (radii.empty()) throw InputError("counting_function: empty radius list");
    for (size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw InputError("counting_function: radii must ascend");

    CountingReport rep;
    rep.radii = radii;
    rep.counts.resize(radii.size());
    const int nthreads = worker_threads();
    std::exception_ptr error;
    std::mutex error_mutex;
    parallel_for(static_cast<int>(radii.size()), nthreads, [&](int i) {
        try {
            WindingOptions local = opts;
            local.evaluation_budget = nullptr;
            // widen the strip until two successive depths agree
            double d = std::min(initial_depth, radii[i]);
            int n = disc_winding(f, radii[i], local, d);
            while (d < radii[i]) {
                double d2 = std::min(1.6 * d, radii[i]);
                int n2 = disc_winding(f, radii[i], local, d2);
                if (n2 == n) break;
                n = n2;
                d = d2;
            }
            rep.counts[i] = n;
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    });
    if (error) std::rethrow_exception(error);

    const size_t n = radii.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += radii[i];
        sy += double(rep.counts[i]);
        sxx += radii[i] * radii[i];
        sxy += radii[i] * double(rep.counts[i]);
    }
    double denom = double(n) * sxx - sx * sx;
    double slope = denom != 0.0 ? (double(n) * sxy - sx * sy) / denom : 0.0;
    double intercept = (sy - slope * sx) / double(n);
    double ss = 0;
    for (size_t i = 0; i < n; ++i)
        ss += sqr(double(rep.counts[i]) - slope * radii[i] - intercept);
    rep.fitted_slope = slope;
    rep.fitted_w = kPi * slope / 2.0;
    rep.fit_residual = std::sqrt(ss / double(n));
    return rep;
}

}  // namespace reslab
