#include "rfcal/acqopt.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace rfcal {

namespace {

struct CurvaturePair {
    Vector s;
    Vector y;
    double rho;
};

Vector project(const Vector& x, const Vector& lo, const Vector& hi)
{
    return x.cwiseMax(lo).cwiseMin(hi);
}

// Zeroes gradient components whose descent direction leaves the box.
Vector projected_gradient(const Vector& x, const Vector& g, const Vector& lo, const Vector& hi)
{
    Vector pg = g;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if ((x[i] <= lo[i] && g[i] > 0.0) || (x[i] >= hi[i] && g[i] < 0.0)) pg[i] = 0.0;
    }
    return pg;
}

// Two-loop recursion: returns -H * g.
Vector lbfgs_direction(const Vector& g, const std::deque<CurvaturePair>& pairs)
{
    Vector q = g;
    std::vector<double> alpha(pairs.size());
    for (std::size_t k = pairs.size(); k-- > 0;) {
        alpha[k] = pairs[k].rho * pairs[k].s.dot(q);
        q -= alpha[k] * pairs[k].y;
    }
    if (!pairs.empty()) {
        const auto& last = pairs.back();
        q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double beta = pairs[k].rho * pairs[k].y.dot(q);
        q += (alpha[k] - beta) * pairs[k].s;
    }
    return -q;
}

bool lexicographically_less(const Vector& a, const Vector& b)
{
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

// Minimizes from `x`; returns the final point and value.
OptimResult local_search(const Objective& f, Vector x, const Vector& lo, const Vector& hi, const OptimizerConfig& cfg)
{
    ObjectiveEval cur = f(x);
    std::deque<CurvaturePair> pairs;

    for (int it = 0; it < cfg.iters; ++it) {
        if (!std::isfinite(cur.value) || !cur.gradient) break;
        const Vector& g = *cur.gradient;
        if (!g.allFinite()) break;
        const Vector pg = projected_gradient(x, g, lo, hi);
        if (pg.norm() <= cfg.convergence_tol) break;

        Vector d = lbfgs_direction(pg, pairs);
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            if (pg[i] == 0.0) d[i] = 0.0;
        }
        if (!(d.dot(pg) < 0.0)) {
            pairs.clear();
            d = -pg;
        }

        double step = cfg.initial_step;
        if (pairs.empty()) step = std::min(cfg.initial_step, 1.0 / d.norm());

        bool accepted = false;
        Vector x_new;
        ObjectiveEval next;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt, step *= cfg.shrink) {
            x_new = project(x + step * d, lo, hi);
            const Vector s = x_new - x;
            if (s.squaredNorm() == 0.0) break;
            next = f(x_new);
            if (std::isfinite(next.value) && next.value <= cur.value + cfg.sufficient_decrease * g.dot(s)) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;

        if (next.gradient) {
            const Vector s = x_new - x;
            const Vector y = *next.gradient - g;
            const double sy = s.dot(y);
            if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
                pairs.push_back({s, y, 1.0 / sy});
                if (static_cast<int>(pairs.size()) > cfg.memory) pairs.pop_front();
            }
        }
        x = std::move(x_new);
        cur = std::move(next);
    }
    return {x, cur.value};
}

}  // namespace

OptimResult optimize(const Objective& objective, const Vector& lo, const Vector& hi, Sense sense,
                     const OptimizerConfig& cfg, RngStream& rng)
{
    if (lo.size() != hi.size() || lo.size() == 0) throw DimensionError("optimize: invalid box");
    if ((hi - lo).minCoeff() < 0.0) throw std::invalid_argument("optimize: box lower bound exceeds upper bound");
    if (cfg.starts < 1 || cfg.iters < 1) throw std::invalid_argument("optimize: starts and iters must be positive");

    const double flip = sense == Sense::Maximize ? -1.0 : 1.0;
    const Objective minimized = [&](const Vector& x) {
        ObjectiveEval e = objective(x);
        e.value *= flip;
        if (e.gradient) *e.gradient *= flip;
        return e;
    };

    std::vector<Vector> starts;
    starts.reserve(cfg.starts);
    for (int s = 0; s < cfg.starts; ++s) {
        Vector x(lo.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
        starts.push_back(std::move(x));
    }

    std::optional<OptimResult> best;
    for (const Vector& x0 : starts) {
        OptimResult r = local_search(minimized, x0, lo, hi, cfg);
        if (!std::isfinite(r.value)) continue;
        if (!best || r.value < best->value || (r.value == best->value && lexicographically_less(r.point, best->point))) {
            best = std::move(r);
        }
    }
    if (!best) throw OptimizationError("optimize: objective is non-finite at every start");
    best->value *= flip;
    return *best;
}

OptimResult optimize(const Objective& objective, const ParameterBox& box, Sense sense, const OptimizerConfig& cfg,
                     RngStream& rng)
{
    const Vector lo = Eigen::Map<const Vector>(box.lower().data(), static_cast<Eigen::Index>(box.dim()));
    const Vector hi = Eigen::Map<const Vector>(box.upper().data(), static_cast<Eigen::Index>(box.dim()));
    return optimize(objective, lo, hi, sense, cfg, rng);
}

}  // namespace rfcal
