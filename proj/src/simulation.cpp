#include "mlob/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "mlob/errors.hpp"

namespace mlob {

namespace {

Estimate mean_and_se(const std::vector<double>& v, std::uint64_t seed) {
    Estimate e;
    e.n_paths = v.size();
    e.seed = seed;
    if (v.empty()) return e;
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    e.estimate = m;
    e.std_error = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size())) : 0.0;
    return e;
}

// index i and weight on sbar[i+1] for time t on a uniform grid
std::pair<std::size_t, double> locate_time(const std::vector<double>& grid, double t) {
    const std::size_t n = grid.size() - 1;
    if (n == 0) return {0, 0.0};
    const double h = grid[1] - grid[0];
    double q = t / h;
    std::size_t i = static_cast<std::size_t>(std::max(0.0, std::floor(q + 1e-9)));
    if (i >= n) return {n - 1, 1.0};
    double lam = (t - grid[i]) / (grid[i + 1] - grid[i]);
    if (std::abs(lam) < 1e-9) lam = 0.0;
    return {i, std::clamp(lam, 0.0, 1.0)};
}

double sbar_at(const std::vector<double>& sbar, std::size_t i, double lam) {
    if (lam == 0.0) return sbar[i];
    return (1.0 - lam) * sbar[i] + lam * sbar[i + 1];
}

}  // namespace

std::uint64_t default_seed() {
    if (const char* s = std::getenv("MLOB_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0' && end != s) return v;
        throw ArgumentError(std::string("MLOB_SEED is not an unsigned integer: ") + s);
    }
    return 20240611ULL;
}

std::vector<double> SimConfig::grid() const {
    const long n = std::max(1L, static_cast<long>(std::ceil(horizon / dt - 1e-9)));
    const double h = horizon / static_cast<double>(n);
    std::vector<double> t(n + 1);
    for (long i = 0; i < n; ++i) t[i] = i * h;
    t[n] = horizon;
    return t;
}

void SimConfig::validate() const {
    if (!(sigma >= 0)) throw ArgumentError("sigma must be >= 0");
    if (!(s0 > 0)) throw ArgumentError("s0 must be > 0");
    if (!(horizon > 0)) throw ArgumentError("horizon must be > 0");
    if (!(dt > 0) || dt > horizon / 100 * (1 + 1e-12)) throw ArgumentError("dt must be in (0, horizon/100]");
    if (n_paths == 0) throw ArgumentError("n_paths must be positive");
}

void gbm_path(const SimConfig& cfg, const std::vector<double>& grid, std::size_t index, Path& out) {
    const std::size_t n = grid.size() - 1;
    std::seed_seq sq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                     static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(sq);
    std::normal_distribution<double> z;
    out.index = index;
    out.t = &grid;
    out.sbar.resize(n + 1);
    out.dw.resize(n);
    const double drift = cfg.mu - 0.5 * cfg.sigma * cfg.sigma;
    double w = 0.0;
    out.sbar[0] = cfg.s0;
    for (std::size_t i = 0; i < n; ++i) {
        double dw = std::sqrt(grid[i + 1] - grid[i]) * z(rng);
        out.dw[i] = dw;
        w += dw;
        out.sbar[i + 1] = cfg.s0 * std::exp(drift * grid[i + 1] + cfg.sigma * w);
    }
}

void for_each_path(const SimConfig& cfg, const std::function<void(const Path&)>& visit) {
    cfg.validate();
    const std::vector<double> grid = cfg.grid();
    const std::size_t N = cfg.n_paths;
    const unsigned w = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(N)));
    auto run = [&](std::size_t lo, std::size_t hi) {
        Path p;
        for (std::size_t i = lo; i < hi; ++i) {
            gbm_path(cfg, grid, i, p);
            visit(p);
        }
    };
    if (w == 1) {
        run(0, N);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < w; ++k) pool.emplace_back(run, N * k / w, N * (k + 1) / w);
    for (auto& th : pool) th.join();
}

PathBundle gbm_paths(const SimConfig& cfg) {
    PathBundle b;
    b.t = cfg.grid();
    b.sbar.resize(cfg.n_paths);
    for_each_path(cfg, [&](const Path& p) { b.sbar[p.index] = p.sbar; });
    return b;
}

Estimate martingale_sanity(const SimConfig& cfg) {
    std::vector<double> v(cfg.n_paths);
    const double disc = std::exp(-cfg.mu * cfg.horizon) / cfg.s0;
    for_each_path(cfg, [&](const Path& p) { v[p.index] = disc * p.sbar.back(); });
    return mean_and_se(v, cfg.seed);
}

ProceedsPlan plan_proceeds(const MarketSpec& s, const Trajectory& tr, const std::vector<double>& grid, double gamma) {
    ProceedsPlan plan;
    const double t_max = grid.back() * (1 + 1e-12);
    const auto& v = tr.samples;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const auto& a = v[k];
        const auto& b = v[k + 1];
        if (b.t > t_max) break;
        double w;
        bool block = b.t == a.t;
        if (block) {
            w = std::exp(-gamma * a.t) * (s.F(a.y) - s.F(b.y));
        } else {
            double da = b.a - a.a;
            if (da == 0.0) continue;
            w = std::exp(-gamma * a.t) * s.f(a.y) * da;
        }
        if (w == 0.0) continue;
        auto [i, lam] = locate_time(grid, a.t);
        plan.entries.push_back({b.t, i, w * (1.0 - lam), w * lam, block});
    }
    return plan;
}

ProceedsEntry pathwise_proceeds(const MarketSpec& s, const Trajectory& tr, const Path& path, double gamma) {
    ProceedsEntry out;
    if (!path.t) throw ArgumentError("pathwise_proceeds: path without grid");
    ProceedsPlan plan = plan_proceeds(s, tr, *path.t, gamma);
    const auto& sb = path.sbar;
    for (const auto& e : plan.entries) {
        double x = e.w_lo * sb[e.i] + (e.w_hi != 0.0 ? e.w_hi * sb[e.i + 1] : 0.0);
        (e.block ? out.block : out.continuous) += x;
    }
    out.total = out.continuous + out.block;
    return out;
}

std::string MartingaleReport::summary() const {
    std::ostringstream os;
    os << std::setprecision(6) << strategy << (optimal ? " (optimal)" : "") << ": G0- = " << g0_minus;
    for (const auto& c : checkpoints)
        os << "; t=" << c.t << " E[G]=" << c.mean << " dev=" << c.deviation << " SE=" << c.std_error;
    os << (pass ? "  pass" : "  FAIL");
    return os.str();
}

namespace {

// G at the checkpoints as grid-segment weights plus the value term.
struct CompiledG {
    struct Segment {
        std::size_t lo = 0;
        std::vector<double> w;
    };
    std::vector<Segment> seg;     // entries with time in (t_{c-1}, t_c]
    std::vector<double> v_coef;   // exp(-gamma t_c) V(Y_tc, Theta_tc)
    std::vector<std::pair<std::size_t, double>> at;  // sbar location of t_c
};

CompiledG compile_g(const MarketSpec& s, const ValueField* field, const Schedule& sc, const std::vector<double>& grid,
                    const std::vector<double>& cps, double gamma) {
    const double h = grid[1] - grid[0];
    Trajectory tr = execute(sc, h, grid.back(), cps);
    ProceedsPlan plan = plan_proceeds(s, tr, grid, gamma);
    CompiledG g;
    std::size_t k = 0;
    for (std::size_t c = 0; c < cps.size(); ++c) {
        const double tc = cps[c] * (1 + 1e-12) + 1e-15;
        CompiledG::Segment sg;
        std::size_t hi = 0;
        std::size_t k0 = k;
        sg.lo = std::numeric_limits<std::size_t>::max();
        for (; k < plan.entries.size() && plan.entries[k].time <= tc; ++k) {
            sg.lo = std::min(sg.lo, plan.entries[k].i);
            hi = std::max(hi, plan.entries[k].i + 1);
        }
        if (k > k0) {
            sg.w.assign(hi - sg.lo + 1, 0.0);
            for (std::size_t j = k0; j < k; ++j) {
                const auto& e = plan.entries[j];
                sg.w[e.i - sg.lo] += e.w_lo;
                sg.w[e.i + 1 - sg.lo] += e.w_hi;
            }
        } else {
            sg.lo = 0;
        }
        g.seg.push_back(std::move(sg));

        // state after every trade at t_c
        const TrajectorySample* last = &tr.samples.front();
        for (const auto& x : tr.samples) {
            if (x.t > tc) break;
            last = &x;
        }
        double V = 0.0;
        if (field && last->theta > 0.0) V = field->value(last->y, last->theta);
        g.v_coef.push_back(std::exp(-gamma * cps[c]) * V);
        g.at.push_back(locate_time(grid, cps[c]));
    }
    return g;
}

}  // namespace

std::vector<MartingaleReport> g_process_check(const ValueField& field, const std::vector<GCandidate>& candidates,
                                              const SimConfig& cfg) {
    cfg.validate();
    const MarketSpec& s = field.spec();
    if (std::abs(s.delta - cfg.delta()) > 1e-12 * std::max(1.0, s.delta))
        throw ArgumentError("g_process_check: spec delta differs from gamma - mu");
    const std::vector<double> grid = cfg.grid();
    const double H = cfg.horizon;
    const std::vector<double> cps{0.0, 0.25 * H, 0.5 * H, H};
    const std::size_t C = cps.size(), M = candidates.size(), N = cfg.n_paths;

    std::vector<CompiledG> comp;
    for (const auto& c : candidates) comp.push_back(compile_g(s, &field, c.schedule, grid, cps, cfg.gamma));

    std::vector<double> G(N * M * C);
    for_each_path(cfg, [&](const Path& p) {
        const auto& sb = p.sbar;
        for (std::size_t m = 0; m < M; ++m) {
            const CompiledG& g = comp[m];
            double cum = 0.0;
            for (std::size_t c = 0; c < C; ++c) {
                const auto& sg = g.seg[c];
                for (std::size_t j = 0; j < sg.w.size(); ++j) cum += sg.w[j] * sb[sg.lo + j];
                auto [i, lam] = g.at[c];
                G[(p.index * M + m) * C + c] = cum + g.v_coef[c] * sbar_at(sb, i, lam);
            }
        }
    });

    std::vector<MartingaleReport> out;
    std::vector<double> col(N);
    for (std::size_t m = 0; m < M; ++m) {
        const auto& cand = candidates[m];
        MartingaleReport r;
        r.strategy = cand.schedule.label;
        r.optimal = cand.optimal;
        r.expect_strict = cand.expect_strict;
        r.n_paths = N;
        r.seed = cfg.seed;
        r.g0_minus = cfg.s0 * (cand.schedule.theta_pre > 0 ? field.value(cand.schedule.y_pre, cand.schedule.theta_pre)
                                                           : 0.0);
        const double floor = 1e-9 * std::abs(r.g0_minus);
        r.pass = true;
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t i = 0; i < N; ++i) col[i] = G[(i * M + m) * C + c];
            Estimate e = mean_and_se(col, cfg.seed);
            Checkpoint ck{cps[c], e.estimate, e.std_error, e.estimate - r.g0_minus, false};
            double band = 3 * e.std_error + floor;
            ck.pass = cand.optimal ? std::abs(ck.deviation) <= band : ck.deviation <= band;
            r.pass = r.pass && ck.pass;
            r.checkpoints.push_back(ck);
        }
        const auto& last = r.checkpoints.back();
        r.strict_shortfall = -last.deviation > 3 * last.std_error;
        if (cand.expect_strict) r.pass = r.pass && r.strict_shortfall;
        out.push_back(std::move(r));
    }
    return out;
}

Estimate proceeds_estimate(const MarketSpec& s, const Schedule& sc, const SimConfig& cfg) {
    cfg.validate();
    const std::vector<double> grid = cfg.grid();
    CompiledG g = compile_g(s, nullptr, sc, grid, {cfg.horizon}, cfg.gamma);
    std::vector<double> v(cfg.n_paths);
    for_each_path(cfg, [&](const Path& p) {
        const auto& sg = g.seg[0];
        double cum = 0.0;
        for (std::size_t j = 0; j < sg.w.size(); ++j) cum += sg.w[j] * p.sbar[sg.lo + j];
        v[p.index] = cum;
    });
    return mean_and_se(v, cfg.seed);
}

DominanceReport perturbation_dominance(std::shared_ptr<const FreeBoundary> fb, double y, double theta,
                                       const std::vector<Strategy>& perturbations, double s0) {
    const double delta = fb->spec().delta;
    DominanceReport rep;
    rep.j_optimal = analytic_J(optimal_schedule(fb, y, theta), s0, delta);
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& st : perturbations) {
        DominanceEntry e;
        e.name = st.name;
        try {
            Schedule sc = compile_strategy(fb, y, theta, st);
            e.admissible = true;
            e.j = analytic_J(sc, s0, delta);
            e.margin = rep.j_optimal - e.j;
            rep.min_margin = std::min(rep.min_margin, e.margin);
            ++rep.compared;
        } catch (const ValidationError& ex) {
            e.reason = ex.what();
        }
        rep.entries.push_back(std::move(e));
    }
    rep.pass = rep.compared > 0 && rep.min_margin >= -kDominanceTol;
    return rep;
}

std::vector<Strategy> standard_perturbations(std::shared_ptr<const FreeBoundary> fb, double y, double theta) {
    Schedule opt = optimal_schedule(fb, y, theta);
    const double d = opt.initial_block;
    const double T = opt.terminal_time > 0 ? opt.terminal_time : 1.0;
    auto name = [](const std::string& base, double x) {
        std::ostringstream os;
        os << base << ' ' << x;
        return os.str();
    };
    std::vector<Strategy> v;
    v.push_back({"optimal", {Leg::optimal()}});
    v.push_back({"immediate dump", {Leg::dump()}});
    for (double w : {0.01, 0.05, 0.1, 0.2, 0.5}) v.push_back({name("delayed start", w), {Leg::wait(w), Leg::optimal()}});
    if (d > 0) {
        // a smaller block followed at once by the optimum is the optimum again
        for (double k : {0.5, 0.8, 0.9, 0.95})
            v.push_back({name("initial block x", k), {Leg::block(k * d), Leg::wait(0.05 * T), Leg::optimal()}});
        for (double k : {1.05, 1.1, 1.2})
            v.push_back({name("initial block x", k), {Leg::block(std::min(k * d, theta)), Leg::optimal()}});
    }
    for (double k : {0.05, 0.1, 0.2})
        v.push_back({name("extra block of theta x", k), {Leg::block(d), Leg::block(k * (theta - d)), Leg::optimal()}});
    for (double k : {0.5, 1.0, 2.0})
        v.push_back({name("constant rate over T x", k), {Leg::at_rate(theta / (k * T), k * T), Leg::dump()}});
    v.push_back({"block then constant rate", {Leg::block(d), Leg::at_rate((theta - d) / T, T), Leg::dump()}});
    for (double w : {0.1, 0.3}) v.push_back({name("hold impact", w), {Leg::block(d), Leg::hold(w), Leg::optimal()}});
    const double r0 = opt.state_at(0.0).rate;
    if (r0 > 0) {
        v.push_back({"fast start", {Leg::block(d), Leg::at_rate(2 * r0, 0.05 * T), Leg::optimal()}});
        v.push_back({"slow start", {Leg::block(d), Leg::at_rate(0.5 * r0, 0.1 * T), Leg::optimal()}});
    }
    return v;
}

LSPath ls_optimal_path(const SimConfig& cfg, double rho, double x, const Path& path, bool bachelier) {
    if (!(rho > 0)) throw ArgumentError("ls_optimal_path: rho must be > 0");
    if (cfg.mu == 0.0 && !bachelier) throw ArgumentError("ls_optimal_path: mu != 0 required");
    const std::vector<double>& t = *path.t;
    const std::size_t n = t.size() - 1;
    const double T = t.back(), mu = cfg.mu, sig = cfg.sigma, S0 = cfg.s0;
    LSPath out;
    out.t = t;
    out.dt_warning = (t[1] - t[0]) > T / 500 * (1 + 1e-12);
    out.x.resize(n + 1);
    out.e.resize(n + 1);
    out.price.resize(n + 1);

    double w = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        if (bachelier)
            out.price[i] = S0 + mu * t[i] + sig * w;
        else
            out.price[i] = path.sbar[i];
        if (i < n) w += path.dw[i];
    }
    // Z0 = -E[K_T + rho int_0^T K ds]
    double Z0;
    if (bachelier)
        Z0 = -(mu * T + 0.5 * rho * mu * T * T);
    else
        Z0 = ((1 - std::exp(mu * T)) * (1 + rho / mu) + rho * T) * S0;
    auto phi = [&](double s) { return 1.0 / (2 + rho * (T - s)); };

    double I = 0.0, K = 0.0, Q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double h = t[i] - t[i - 1], s = t[i - 1];
            Q += rho * 0.5 * (I + K) * h;
            if (!bachelier) {
                double coef = (1 - std::exp(mu * (T - s))) * (1 + rho / mu) + rho * (T - s);
                I += phi(s) * coef * sig * out.price[i - 1] * path.dw[i - 1];
                K += mu * out.price[i - 1] * h;
            } else {
                K = mu * t[i];
            }
        }
        double kprime = bachelier ? mu : mu * out.price[i];
        out.x[i] = (x * (1 + rho * (T - t[i])) - 0.5 * (1 + rho * t[i]) * Z0) / (2 + rho * T) - 0.5 * I +
                   kprime / (2 * rho) - Q;
    }
    out.x[n] = 0.0;

    double prev_e = 0.0, prev_x = x;
    out.min_price = out.price[0];
    for (std::size_t i = 0; i <= n; ++i) {
        double decay = i == 0 ? 1.0 : std::exp(-rho * (t[i] - t[i - 1]));
        double e_minus = prev_e * decay;
        out.min_price = std::min(out.min_price, out.price[i] + e_minus);
        out.e[i] = e_minus + (out.x[i] - prev_x);
        prev_e = out.e[i];
        prev_x = out.x[i];
    }
    return out;
}

namespace {

LSHorizonStats ls_stats(const SimConfig& cfg, double rho, double x, bool bachelier, std::size_t n_samples) {
    const std::size_t N = cfg.n_paths;
    std::vector<char> neg(N), nonmono(N);
    std::vector<double> var(N);
    LSHorizonStats st;
    st.horizon = cfg.horizon;
    st.samples.resize(std::min(n_samples, N));
    for_each_path(cfg, [&](const Path& p) {
        LSPath ls = ls_optimal_path(cfg, rho, x, p, bachelier);
        neg[p.index] = ls.min_price < 0.0;
        bool up = false, down = false;
        double tv = 0.0;
        for (std::size_t i = 1; i + 1 < ls.x.size(); ++i) {
            double d = ls.x[i] - ls.x[i - 1];
            up = up || d > 0;
            down = down || d < 0;
            tv += std::abs(d);
        }
        nonmono[p.index] = up && down;
        var[p.index] = tv;
        if (p.index < st.samples.size()) st.samples[p.index] = std::move(ls);
    });
    std::size_t k = 0, m = 0;
    double tv = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        k += neg[i];
        m += nonmono[i];
        tv += var[i];
    }
    double p = static_cast<double>(k) / static_cast<double>(N);
    st.p_negative = {p, std::sqrt(p * (1 - p) / static_cast<double>(N)), N, cfg.seed};
    st.nonmonotone_fraction = static_cast<double>(m) / static_cast<double>(N);
    st.mean_variation = tv / static_cast<double>(N);
    return st;
}

}  // namespace

Estimate negative_price_probability(const SimConfig& cfg, double rho, double x_init, bool bachelier) {
    return ls_stats(cfg, rho, x_init, bachelier, 0).p_negative;
}

ComparisonBundle mlob_vs_ls_compare(const SimConfig& cfg, double rho, double c, double x_init,
                                    const std::vector<double>& horizons, std::size_t n_samples) {
    ComparisonBundle b;
    auto spec = std::make_shared<const MarketSpec>(power_law_spec({c, 1.0, rho}, cfg.delta()));
    auto fb = solve_boundary(spec, critical_points(*spec));
    Schedule sc = optimal_schedule(fb, 0.0, x_init);
    b.mlob_T = sc.terminal_time;
    b.mlob_initial_block = sc.initial_block;
    b.mlob = execute(sc, std::max(sc.terminal_time, 1e-3) / 1000);
    b.mlob_monotone = true;
    for (std::size_t i = 1; i < b.mlob.samples.size(); ++i)
        b.mlob_monotone = b.mlob_monotone && b.mlob.samples[i].theta <= b.mlob.samples[i - 1].theta;
    for (double T : horizons) {
        SimConfig h = cfg;
        h.horizon = T;
        h.dt = 1e-3 * T;
        b.ls.push_back(ls_stats(h, rho, x_init, false, n_samples));
    }
    return b;
}

}  // namespace mlob
