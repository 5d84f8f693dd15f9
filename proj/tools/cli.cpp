#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "mlob/errors.hpp"
#include "mlob/free_boundary.hpp"
#include "mlob/simulation.hpp"
#include "mlob/strategy.hpp"
#include "mlob/value_function.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace mlob::cli {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

namespace {

// Parameters of the LS comparison example; compare-ls starts from these when
// no config is given.
const std::map<std::string, std::string> kLsExample{
    {"name", "ls-example"}, {"c", "1"},      {"r", "1"},      {"beta", "1"}, {"mu", "-0.5"},
    {"gamma", "0"},         {"sigma", "1"},  {"rho", "1"},    {"y0", "0"},   {"theta0", "1"},
    {"paths", "100000"}};

struct Flags {
    std::string config;
    std::optional<double> y0, theta0, theta_max, horizon, dt;
    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string out_dir = ".";
    std::string manifest;
};

struct Run {
    std::string sub;
    Config cfg;
    Options opt;
    fs::path out_dir;
    std::ostream& out;
    std::ostream& err;
    json outputs = json::array();

    void write(const std::string& name, const std::string& content) {
        fs::create_directories(out_dir);
        std::ofstream f(out_dir / name, std::ios::binary);
        if (!f) throw ArgumentError("cannot write '" + (out_dir / name).string() + "'");
        f << content;
        outputs.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
        out << "wrote " << (out_dir / name).string() << '\n';
    }

    void manifest() {
        json cfgj = json::object();
        for (const auto& [k, v] : cfg.resolved()) cfgj[k] = v;
        json m{{"schema_version", kManifestSchema},
               {"tool", "mlob"},
               {"tool_version", kVersion},
               {"subcommand", sub},
               {"config", cfgj},
               {"options",
                {{"mode", opt.mode},
                 {"format", opt.format},
                 {"grid", opt.grid},
                 {"y_range", opt.y_range},
                 {"theta_range", opt.theta_range},
                 {"horizons", opt.horizons},
                 {"save_paths", opt.save_paths}}},
               {"seed", cfg.seed},
               {"outputs", outputs}};
        fs::create_directories(out_dir);
        std::ofstream(out_dir / "manifest.json") << m.dump(2) << '\n';
    }
};

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ArgumentError(std::string("--") + what + ": not a number list: '" + s + "'");
        }
    }
    if (v.empty()) throw ArgumentError(std::string("--") + what + ": empty");
    return v;
}

std::pair<double, double> parse_range(const std::string& s, const char* what) {
    auto v = parse_list(s, what);
    if (v.size() != 2 || !(v[0] < v[1])) throw ArgumentError(std::string("--") + what + ": expected 'lo,hi' with lo < hi");
    return {v[0], v[1]};
}

std::pair<int, int> parse_grid(const std::string& s, int dflt) {
    if (s.empty()) return {dflt, dflt};
    auto v = parse_list(s, "grid");
    if (v.size() != 2 || v[0] < 2 || v[1] < 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]))
        throw ArgumentError("--grid: expected 'NY,NT' with integers >= 2");
    return {int(v[0]), int(v[1])};
}

std::string csv_num(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

void require_mode(const Run& r, std::initializer_list<const char*> allowed) {
    for (const char* m : allowed)
        if (r.opt.mode == m) return;
    throw ArgumentError(r.sub + ": --mode " + r.opt.mode + " is not supported here");
}

std::shared_ptr<const MarketSpec> spec_of(const Config& cfg, bool allow_zero_delta = false) {
    return std::make_shared<const MarketSpec>(cfg.spec(allow_zero_delta));
}

std::shared_ptr<const FreeBoundary> liquidation_boundary(const Config& cfg) {
    auto s = spec_of(cfg);
    return solve_boundary(s, critical_points(*s), cfg.theta_max);
}

// ---- check

Interval search_interval(const MarketSpec& s, double c) {
    Interval iv{-50 * c, 50 * c};
    if (std::isfinite(s.domain.lo)) iv.lo = std::max(iv.lo, 0.999 * s.domain.lo);
    if (std::isfinite(s.domain.hi)) iv.hi = std::min(iv.hi, 0.999 * s.domain.hi);
    return iv;
}

int cmd_check(Run& r) {
    MarketSpec s;
    try {
        s = r.cfg.spec(r.opt.mode == "type-a");
    } catch (const ValidationError& e) {
        r.out << "invalid: " << e.what() << '\n';
        return kInvalid;
    }
    AssumptionReport rep;
    try {
        rep = check_assumptions(s, search_interval(s, r.cfg.book.c));
    } catch (const ValidationError& e) {
        r.out << "invalid: " << e.what() << '\n';
        return kInvalid;
    }
    r.out << rep.summary() << '\n';
    if (r.opt.mode == "type-a" && r.cfg.delta == 0.0) {
        // the finite-horizon problem runs without discounting
        std::erase_if(rep.violations, [](const std::string& v) { return v.find("delta > 0") != std::string::npos; });
        rep.valid = rep.violations.empty();
    }
    if (!rep.valid) {
        for (const auto& v : rep.violations) r.out << "violated: " << v << '\n';
        return kInvalid;
    }
    r.out << "valid\n";
    return kOk;
}

// ---- boundary

int cmd_boundary(Run& r) {
    require_mode(r, {"monotone", "two-sided", "acquisition"});
    std::shared_ptr<const FreeBoundary> fb;
    if (r.opt.mode == "acquisition")
        fb = acquisition_boundary(spec_of(r.cfg), r.cfg.acquisition_eta(), r.cfg.theta_max);
    else
        fb = liquidation_boundary(r.cfg);
    r.out << "y0 = " << csv_num(fb->critical().y0);
    if (fb->kind() == BoundaryKind::Liquidation) r.out << ", y_inf = " << csv_num(fb->critical().y_inf);
    r.out << ", theta covered = " << csv_num(fb->theta_covered())
          << (fb->asymptote_reached() ? " (asymptote reached)" : "") << '\n';
    if (r.opt.format == "csv") {
        std::ostringstream os;
        write_boundary_csv(os, *fb);
        r.write("boundary.csv", os.str());
    } else {
        json j{{"kind", fb->kind() == BoundaryKind::Liquidation ? "liquidation" : "acquisition"},
               {"y0", fb->critical().y0}};
        if (fb->kind() == BoundaryKind::Liquidation) j["y_inf"] = fb->critical().y_inf;
        else j["eta"] = fb->eta();
        j["theta_max"] = fb->theta_max();
        j["asymptote_reached"] = fb->asymptote_reached();
        json s = json::array();
        for (const auto& p : fb->samples()) s.push_back({{"y", p.y}, {"theta", p.theta}, {"tau", p.tau}});
        j["samples"] = std::move(s);
        r.write("boundary.json", j.dump(1) + "\n");
    }
    r.manifest();
    return kOk;
}

// ---- value

int cmd_value(Run& r) {
    require_mode(r, {"monotone", "two-sided"});
    const bool two = r.opt.mode == "two-sided";
    auto [ny, nt] = parse_grid(r.opt.grid, 201);
    auto [ylo, yhi] = parse_range(r.opt.y_range, "y-range");
    auto [tlo, thi] = parse_range(r.opt.theta_range, "theta-range");
    if (tlo < 0) throw ArgumentError("--theta-range: theta must be >= 0");
    ValueField field(liquidation_boundary(r.cfg));
    const auto& spec = field.spec();

    std::ostringstream csv;
    csv << std::setprecision(17);
    json rows = json::array();
    if (r.opt.format == "csv") csv << "y,theta,region,V,V_y,V_theta\n";
    long skipped = 0;
    for (int i = 0; i < ny; ++i) {
        double y = ylo + (yhi - ylo) * i / (ny - 1);
        for (int k = 0; k < nt; ++k) {
            double th = tlo + (thi - tlo) * k / (nt - 1);
            if (!spec.in_domain(y)) {
                ++skipped;
                continue;
            }
            double v, vy, vt;
            Region reg;
            try {
                reg = field.region(y, th, two);
                v = two ? field.value_two_sided(y, th) : field.value(y, th);
                Partials p = two ? field.partials_two_sided(y, th) : field.partials(y, th);
                vy = p.v_y;
                vt = p.v_theta;
            } catch (const RangeError&) {
                ++skipped;
                continue;
            }
            if (r.opt.format == "csv")
                csv << y << ',' << th << ',' << to_string(reg) << ',' << v << ',' << vy << ',' << vt << '\n';
            else
                rows.push_back({{"y", y}, {"theta", th}, {"region", to_string(reg)}, {"V", v}, {"V_y", vy},
                                {"V_theta", vt}});
        }
    }
    if (skipped) r.out << skipped << " grid points outside the domain or the solved boundary were skipped\n";
    if (r.opt.format == "csv")
        r.write("value.csv", csv.str());
    else
        r.write("value.json", json{{"two_sided", two}, {"points", rows}}.dump(1) + "\n");
    r.manifest();
    return kOk;
}

// ---- schedule

struct Built {
    Schedule schedule;
    double j_delta;  // discount for analytic_J
    std::optional<double> bound;
};

Built build_schedule(const Config& cfg, const std::string& mode) {
    const double y = cfg.y_init, th = cfg.theta_init;
    if (mode == "monotone") return {optimal_schedule(liquidation_boundary(cfg), y, th), cfg.delta, {}};
    if (mode == "two-sided") return {optimal_schedule_two_sided(liquidation_boundary(cfg), y, th), cfg.delta, {}};
    if (mode == "acquisition") {
        double eta = cfg.acquisition_eta();
        auto acq = acquisition_boundary(spec_of(cfg), eta, std::max(cfg.theta_max, th));
        return {acquisition_schedule(acq, y, th), -eta, {}};
    }
    auto plan = type_a_schedule(spec_of(cfg, true), cfg.horizon, y, th);
    return {plan.schedule, cfg.delta, plan.bound};
}

json schedule_json(const Schedule& sc, const Trajectory* tr) {
    json j{{"kind", to_string(sc.kind)},
           {"initial_block", sc.initial_block},
           {"wait_time", sc.wait_time},
           {"terminal_time", sc.terminal_time}};
    if (tr) {
        json s = json::array();
        for (const auto& p : tr->samples)
            s.push_back({{"t", p.t}, {"theta", p.theta}, {"y", p.y}, {"a", p.a}, {"rate", p.rate}});
        j["samples"] = std::move(s);
    }
    return j;
}

int cmd_schedule(Run& r) {
    Built b = build_schedule(r.cfg, r.opt.mode);
    const Schedule& sc = b.schedule;
    double j = analytic_J(sc, r.cfg.s0, b.j_delta);
    r.out << "kind " << to_string(sc.kind) << ", initial block " << csv_num(sc.initial_block) << ", wait "
          << csv_num(sc.wait_time) << ", T " << csv_num(sc.terminal_time) << ", J " << csv_num(j) << '\n';
    if (b.bound) r.out << "Jensen bound " << csv_num(*b.bound * r.cfg.s0) << '\n';
    double span = std::max(sc.terminal_time, r.cfg.horizon);
    double dt = std::min(r.cfg.dt, span / 100);
    Trajectory tr = execute(sc, dt, span);
    if (r.opt.format == "csv") {
        std::ostringstream os;
        write_trajectory_csv(os, tr);
        r.write("trajectory.csv", os.str());
        json summary = schedule_json(sc, nullptr);
        summary["J"] = j;
        r.write("schedule.json", summary.dump(2) + "\n");
    } else {
        json sj = schedule_json(sc, &tr);
        sj["J"] = j;
        r.write("schedule.json", sj.dump(1) + "\n");
    }
    r.manifest();
    return kOk;
}

// ---- simulate

json estimate_json(const Estimate& e) {
    return {{"estimate", e.estimate}, {"std_error", e.std_error}, {"n_paths", e.n_paths}, {"seed", e.seed}};
}

// rows t,path_id,sbar,y,theta,x_ls
void paths_table(std::ostringstream& csv, json& arr, bool as_csv, const Path& p, const Schedule* sc,
                 const LSPath* ls) {
    const auto& t = *p.t;
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::optional<ScheduleState> st;
        if (sc) st = sc->state_at(t[i]);
        std::optional<double> x;
        if (ls) x = ls->x[i];
        if (as_csv) {
            csv << t[i] << ',' << p.index << ',' << p.sbar[i] << ',';
            if (st) csv << st->y << ',' << st->theta;
            else csv << ',';
            csv << ',';
            if (x) csv << *x;
            csv << '\n';
        } else {
            json row{{"t", t[i]}, {"path_id", p.index}, {"sbar", p.sbar[i]}};
            row["y"] = st ? json(st->y) : json(nullptr);
            row["theta"] = st ? json(st->theta) : json(nullptr);
            row["x_ls"] = x ? json(*x) : json(nullptr);
            arr.push_back(std::move(row));
        }
    }
}

int cmd_simulate(Run& r) {
    require_mode(r, {"monotone", "two-sided", "type-a"});
    Built b = build_schedule(r.cfg, r.opt.mode);
    const Schedule& sc = b.schedule;
    SimConfig sim = r.cfg.sim();
    sim.horizon = std::max(sim.horizon, sc.terminal_time);
    sim.dt = std::min(sim.dt, sim.horizon / 100);
    sim.validate();

    json rep;
    rep["schedule"] = schedule_json(sc, nullptr);
    rep["horizon"] = sim.horizon;
    rep["dt"] = sim.dt;
    rep["analytic_J"] = analytic_J(sc, sim.s0, b.j_delta);
    rep["proceeds"] = estimate_json(proceeds_estimate(sc.spec ? *sc.spec : r.cfg.spec(true), sc, sim));
    rep["martingale_sanity"] = estimate_json(martingale_sanity(sim));
    if (r.opt.mode == "monotone") {
        ValueField field(sc.boundary ? sc.boundary : liquidation_boundary(r.cfg));
        auto reps = g_process_check(field, {{sc, true, false}}, sim);
        json cps = json::array();
        for (const auto& c : reps[0].checkpoints)
            cps.push_back({{"t", c.t}, {"mean", c.mean}, {"std_error", c.std_error}, {"deviation", c.deviation},
                           {"pass", c.pass}});
        rep["g_process"] = {{"g0_minus", reps[0].g0_minus}, {"checkpoints", cps}, {"pass", reps[0].pass}};
        r.out << reps[0].summary() << '\n';
    }
    r.out << "proceeds " << csv_num(rep["proceeds"]["estimate"].get<double>()) << " +- "
          << csv_num(rep["proceeds"]["std_error"].get<double>()) << " (analytic " << csv_num(rep["analytic_J"].get<double>())
          << ")\n";
    r.write("report.json", rep.dump(2) + "\n");

    auto grid = sim.grid();
    std::ostringstream csv;
    csv << std::setprecision(17) << "t,path_id,sbar,y,theta,x_ls\n";
    json arr = json::array();
    const bool as_csv = r.opt.format == "csv";
    const double rho = r.cfg.ls_rho();
    for (std::size_t i = 0; i < std::min(r.opt.save_paths, sim.n_paths); ++i) {
        Path p;
        gbm_path(sim, grid, i, p);
        std::optional<LSPath> ls;
        if (sim.mu != 0.0) ls = ls_optimal_path(sim, rho, r.cfg.theta_init, p);
        paths_table(csv, arr, as_csv, p, &sc, ls ? &*ls : nullptr);
    }
    if (as_csv) r.write("paths.csv", csv.str());
    else r.write("paths.json", arr.dump(1) + "\n");
    r.manifest();
    return kOk;
}

// ---- compare-ls

int cmd_compare_ls(Run& r) {
    require_mode(r, {"monotone"});
    if (r.cfg.book.r != 1.0) throw ArgumentError("compare-ls: the comparison needs r = 1 (exponential book)");
    SimConfig sim = r.cfg.sim();
    const double rho = r.cfg.ls_rho(), x = r.cfg.theta_init;
    auto horizons = parse_list(r.opt.horizons, "horizons");
    for (double h : horizons)
        if (!(h > 0)) throw ArgumentError("--horizons: horizons must be > 0");
    auto bundle = mlob_vs_ls_compare(sim, rho, r.cfg.book.c, x, horizons, r.opt.save_paths);

    // same construction as the bundle, kept for state lookups
    auto spec = std::make_shared<const MarketSpec>(power_law_spec({r.cfg.book.c, 1.0, rho}, sim.delta()));
    Schedule sc = optimal_schedule(solve_boundary(spec, critical_points(*spec)), 0.0, x);

    json j;
    j["parameters"] = {{"mu", sim.mu}, {"sigma", sim.sigma}, {"gamma", sim.gamma}, {"rho", rho},
                       {"c", r.cfg.book.c}, {"s0", sim.s0}, {"x0", x}};
    j["mlob"] = {{"liquidation_time", bundle.mlob_T},
                 {"initial_block", bundle.mlob_initial_block},
                 {"monotone", bundle.mlob_monotone}};
    json ls = json::array();
    for (const auto& h : bundle.ls) {
        json e = estimate_json(h.p_negative);
        ls.push_back({{"horizon", h.horizon},
                      {"dt", 1e-3 * h.horizon},
                      {"p_negative", e},
                      {"nonmonotone_fraction", h.nonmonotone_fraction},
                      {"mean_variation", h.mean_variation}});
        r.out << "T = " << csv_num(h.horizon) << ": p_T = " << csv_num(h.p_negative.estimate) << " +- "
              << csv_num(h.p_negative.std_error) << '\n';
    }
    j["ls"] = std::move(ls);
    r.out << "mLOB liquidation time " << csv_num(bundle.mlob_T) << '\n';
    r.write("compare.json", j.dump(2) + "\n");

    const bool as_csv = r.opt.format == "csv";
    for (std::size_t k = 0; k < bundle.ls.size(); ++k) {
        const auto& h = bundle.ls[k];
        SimConfig hs = sim;
        hs.horizon = h.horizon;
        hs.dt = 1e-3 * h.horizon;
        auto grid = hs.grid();
        std::ostringstream csv;
        csv << std::setprecision(17) << "t,path_id,sbar,y,theta,x_ls\n";
        json arr = json::array();
        for (std::size_t i = 0; i < h.samples.size(); ++i) {
            Path p;
            gbm_path(hs, grid, i, p);
            paths_table(csv, arr, as_csv, p, &sc, &h.samples[i]);
        }
        std::string stem = "paths_T" + std::to_string(k);
        if (as_csv) r.write(stem + ".csv", csv.str());
        else r.write(stem + ".json", arr.dump(1) + "\n");
    }
    r.manifest();
    return kOk;
}

// ---- verify

int cmd_verify(Run& r) {
    require_mode(r, {"monotone"});
    auto [ny, nt] = parse_grid(r.opt.grid, 200);
    VerifyResult v = run_verify(r.cfg, r.opt, ny, nt, r.out);
    r.write("verify.json", v.report.dump(2) + "\n");
    r.manifest();
    r.out << (v.pass ? "all checks passed\n" : "verification FAILED\n");
    return v.pass ? kOk : kVerifyFailed;
}

int dispatch(Run& r) {
    if (r.sub == "check") return cmd_check(r);
    if (r.sub == "boundary") return cmd_boundary(r);
    if (r.sub == "value") return cmd_value(r);
    if (r.sub == "schedule") return cmd_schedule(r);
    if (r.sub == "simulate") return cmd_simulate(r);
    if (r.sub == "compare-ls") return cmd_compare_ls(r);
    if (r.sub == "verify") return cmd_verify(r);
    throw ArgumentError("unknown subcommand '" + r.sub + "'");
}

Config load_config(const std::string& sub, const Flags& f) {
    Config c;
    if (!f.config.empty()) c = Config::load(f.config);
    else if (sub == "compare-ls") c = Config::from_map(kLsExample);
    else c = Config::from_map({});
    if (f.y0) c.y_init = *f.y0;
    if (f.theta0) c.theta_init = *f.theta0;
    if (f.theta_max) c.theta_max = *f.theta_max;
    if (f.horizon) c.horizon = *f.horizon;
    if (f.dt) c.dt = *f.dt;
    if (f.paths) c.paths = *f.paths;
    if (f.seed) c.seed = *f.seed;
    if (f.workers) c.workers = *f.workers;
    if (!(c.theta_init >= 0)) throw ArgumentError("theta0 must be >= 0");
    return c;
}

int replay(const Flags& f, std::ostream& out, std::ostream& err) {
    std::ifstream in(f.manifest);
    if (!in) throw ArgumentError("cannot open manifest '" + f.manifest + "'");
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("manifest: ") + e.what());
    }
    try {
        if (m.at("schema_version").get<int>() != kManifestSchema)
            throw ArgumentError("manifest: unsupported schema_version");
        std::map<std::string, std::string> kv;
        for (const auto& [k, v] : m.at("config").items()) kv[k] = v.get<std::string>();
        const json& o = m.at("options");
        Options opt;
        opt.mode = o.at("mode");
        opt.format = o.at("format");
        opt.grid = o.at("grid");
        opt.y_range = o.at("y_range");
        opt.theta_range = o.at("theta_range");
        opt.horizons = o.at("horizons");
        opt.save_paths = o.at("save_paths");
        fs::path dir = f.out_dir != "." ? fs::path(f.out_dir) : fs::path(f.manifest).parent_path() / "replay";
        Run r{m.at("subcommand"), Config::from_map(kv), opt, dir, out, err};
        int code = dispatch(r);
        std::map<std::string, std::string> now;
        for (const auto& o2 : r.outputs) now[o2["path"]] = o2["sha256"];
        bool same = true;
        for (const auto& o1 : m.at("outputs")) {
            std::string p = o1.at("path"), h = o1.at("sha256");
            bool eq = now.count(p) && now[p] == h;
            out << (eq ? "identical " : "DIFFERS   ") << p << '\n';
            same = same && eq;
        }
        if (now.size() != m.at("outputs").size()) same = false;
        if (!same) {
            err << "replay: outputs differ from the manifest\n";
            return kVerifyFailed;
        }
        return code;
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("manifest: ") + e.what());
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal liquidation under multiplicative transient impact", "mlob"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1, 1);

    Flags f;
    Options opt;
    std::string sub;
    const std::vector<std::pair<const char*, const char*>> subs{
        {"check", "validate the model assumptions of a config"},
        {"boundary", "solve and export the free boundary"},
        {"value", "value function and partials on a grid"},
        {"schedule", "optimal schedule from (y0, theta0)"},
        {"simulate", "Monte-Carlo proceeds and G-process check"},
        {"compare-ls", "mLOB against the Lorenz-Schied model"},
        {"verify", "run the invariant suite"},
        {"replay", "regenerate outputs from a manifest and compare hashes"}};
    for (auto [name, help] : subs) {
        CLI::App* s = app.add_subcommand(name, help);
        s->callback([&sub, n = std::string(name)] { sub = n; });
        if (std::string(name) == "replay") {
            s->add_option("--manifest", f.manifest, "manifest.json of an earlier run")->required();
            s->add_option("--out-dir", f.out_dir, "where to regenerate (default: <manifest dir>/replay)");
            continue;
        }
        s->add_option("--config", f.config, "key = value config file");
        if (std::string(name) == "check") {
            s->add_option("config_file", f.config, "config file")->excludes("--config");
            s->add_option("--mode", opt.mode)->check(CLI::IsMember({"monotone", "two-sided", "acquisition", "type-a"}));
            continue;
        }
        s->add_option("--y0", f.y0, "initial impact Y0-");
        s->add_option("--theta0", f.theta0, "initial position (target for acquisition)");
        s->add_option("--theta-max", f.theta_max, "boundary coverage");
        s->add_option("--horizon", f.horizon, "simulation / type-A horizon");
        s->add_option("--dt", f.dt, "time step");
        s->add_option("--grid", opt.grid, "NY,NT grid size");
        s->add_option("--y-range", opt.y_range, "lo,hi of y for value grids");
        s->add_option("--theta-range", opt.theta_range, "lo,hi of theta for value grids");
        s->add_option("--paths", f.paths, "Monte-Carlo paths");
        s->add_option("--seed", f.seed, "RNG seed (default MLOB_SEED or built in)");
        s->add_option("--workers", f.workers, "simulation threads")->check(CLI::PositiveNumber);
        s->add_option("--save-paths", opt.save_paths, "sample paths written to CSV");
        s->add_option("--horizons", opt.horizons, "compare-ls horizons, comma separated");
        s->add_option("--out-dir", f.out_dir, "output directory");
        s->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--mode", opt.mode)->check(CLI::IsMember({"monotone", "two-sided", "acquisition", "type-a"}));
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (sub == "replay") return replay(f, out, err);
        Run r{sub, load_config(sub, f), opt, fs::path(f.out_dir), out, err};
        return dispatch(r);
    } catch (const ArgumentError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace mlob::cli
