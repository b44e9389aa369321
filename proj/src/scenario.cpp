//==============================================================================
// scenario.cpp
// Manifest-driven runs: initial-data generators behind a JSON schema, the
// scenario/sweep/verify/analyze drivers and their CSV/JSON outputs. Config
// errors carry the offending field path. Outputs are byte-stable for a
// fixed seed on one platform (all floats printed with %.17g).
//==============================================================================

#include "mns/scenario.hpp"

#include "mns/besov.hpp"
#include "mns/diagnostics.hpp"
#include "mns/estimates.hpp"
#include "mns/initial_data.hpp"
#include "mns/picard.hpp"
#include "mns/profiles.hpp"
#include "mns/spectral_ops.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace mns {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& dir, const std::string& file) {
    std::filesystem::create_directories(dir);
    std::ofstream os(dir + "/" + file);
    if (!os) throw std::runtime_error("cannot open output file " + dir + "/" + file);
    return os;
}

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config: " + path + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) config_error(path + "." + key, "missing");
    return j.at(key);
}

double num(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number()) config_error(path + "." + key, "must be a number");
    return v.get<double>();
}

double num_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        config_error(key, "must be a number");
    return j.at(key).get<double>();
}

int int_or(const json& j, const std::string& key, int fallback) {
    return static_cast<int>(num_or(j, key, fallback));
}

std::string status_name(SolveStatus s) {
    switch (s) {
    case SolveStatus::Completed: return "completed";
    case SolveStatus::BlowupDeclared: return "blowup_declared";
    case SolveStatus::Quiescent: return "quiescent";
    case SolveStatus::ContractionFailed: return "contraction_failed";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::MaxSteps: return "max_steps";
    }
    return "unknown";
}

} // namespace

Grid parse_grid(const json& j) {
    if (!j.is_object()) config_error("grid", "must be an object");
    const int d = static_cast<int>(num(j, "d", "grid"));
    const int n = static_cast<int>(num(j, "N", "grid"));
    const double lambda = num_or(j, "lambda", 1.0);
    const double dealias = num_or(j, "dealias", 2.0 / 3.0);
    try {
        return Grid(d, n, lambda, dealias);
    } catch (const std::invalid_argument& e) {
        config_error("grid", e.what());
    }
}

SolverConfig parse_solver_config(const json& j) {
    SolverConfig cfg;
    if (j.is_null()) return cfg;
    if (!j.is_object()) config_error("solver", "must be an object");
    cfg.c_solve = num_or(j, "c_solve", cfg.c_solve);
    if (cfg.c_solve < 1.0) config_error("solver.c_solve", "must be >= 1");
    cfg.gl_nodes = int_or(j, "nodes", cfg.gl_nodes);
    if (cfg.gl_nodes < 4) config_error("solver.nodes", "must be >= 4");
    cfg.sub_segments = int_or(j, "sub_segments", cfg.sub_segments);
    cfg.max_steps = int_or(j, "max_steps", cfg.max_steps);
    cfg.omega_cap_factor = num_or(j, "omega_cap_factor", cfg.omega_cap_factor);
    cfg.dt_floor = num_or(j, "dt_floor", cfg.dt_floor);
    cfg.dt_max = num_or(j, "dt_max", cfg.dt_max);
    cfg.fixed_point_tol = num_or(j, "fixed_point_tol", cfg.fixed_point_tol);
    cfg.max_sweeps = int_or(j, "max_sweeps", cfg.max_sweeps);
    cfg.max_halvings = int_or(j, "max_halvings", cfg.max_halvings);
    if (j.contains("refine_sup")) cfg.refine_sup = j.at("refine_sup").get<bool>();
    if (j.contains("record_support")) cfg.record_support = j.at("record_support").get<bool>();
    if (j.contains("p_diag")) {
        cfg.p_diag.clear();
        for (const auto& v : j.at("p_diag")) cfg.p_diag.push_back(v.get<double>());
    }
    return cfg;
}

SpectralField make_initial_data(const Grid& grid, const json& spec, std::uint64_t seed) {
    if (!spec.is_object()) config_error("initial_data", "must be an object");
    const std::string gen = require(spec, "generator", "initial_data").get<std::string>();
    const json params = spec.contains("params") ? spec.at("params") : json::object();

    SpectralField u(grid, true);
    if (gen == "taylor_green") {
        u = taylor_green(grid);
    } else if (gen == "random_divfree") {
        RandomFieldOptions opts;
        opts.amplitude = num_or(params, "amplitude", opts.amplitude);
        opts.spectrum_slope = num_or(params, "slope", opts.spectrum_slope);
        opts.band_lo = num_or(params, "band_lo", opts.band_lo);
        opts.band_hi = num_or(params, "band_hi", opts.band_hi);
        opts.seed = params.contains("seed") ? params.at("seed").get<std::uint64_t>() : seed;
        u = random_divfree(grid, opts);
    } else if (gen == "half_space") {
        const int L = static_cast<int>(num(params, "L", "initial_data.params"));
        const double c = num(params, "c", "initial_data.params");
        u = half_space_data(grid, L, c);
    } else if (gen == "bump") {
        BumpOptions opts;
        opts.amplitude = num_or(params, "amplitude", opts.amplitude);
        opts.width = num_or(params, "width", opts.width);
        opts.direction = int_or(params, "direction", opts.direction);
        if (params.contains("center")) {
            const auto& c = params.at("center");
            for (std::size_t a = 0; a < c.size() && a < 3; ++a)
                opts.center[a] = c[a].get<double>();
        }
        u = bump_divfree(grid, opts);
    } else if (gen == "file") {
        const std::string path = require(params, "path", "initial_data.params").get<std::string>();
        u = load_field(path);
        if (u.grid() != grid) config_error("initial_data.params.path", "grid mismatch with manifest grid");
    } else {
        config_error("initial_data.generator", "unknown generator '" + gen + "'");
    }

    if (spec.contains("post_ops")) {
        for (const auto& op : spec.at("post_ops")) {
            const std::string name = require(op, "op", "initial_data.post_ops").get<std::string>();
            if (name == "leray_project") {
                u = leray_project(u);
            } else if (name == "rescale") {
                u = rescale_box(u, num(op, "lambda", "initial_data.post_ops.rescale"));
            } else {
                config_error("initial_data.post_ops.op", "unknown op '" + name + "'");
            }
        }
    }
    return u;
}

namespace {

void write_steps_csv(const Trajectory& traj, const SolverConfig& cfg, const std::string& dir) {
    std::ofstream os = open_out(dir, "steps.csv");
    os << "t,dt,omega";
    for (double p : cfg.p_diag) os << ",l" << fmt(p);
    os << ",energy,dissipation,support_xi1\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const StepRecord& r = traj.record(i);
        os << fmt(r.t) << "," << fmt(r.dt) << "," << fmt(r.omega);
        for (const auto& [p, v] : r.lp) os << "," << fmt(v);
        os << "," << fmt(r.energy) << "," << fmt(r.dissipation) << "," << fmt(r.support_xi1)
           << "\n";
    }
}

void write_trace_csv(const Trace& tr, const std::string& dir, const std::string& file,
                     const std::string& col) {
    std::ofstream os = open_out(dir, file);
    os << "t," << col << "\n";
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        os << fmt(tr.t[i]) << "," << fmt(tr.value[i]) << "\n";
}

double resolve_c_conc(const json& conc) {
    if (conc.contains("c_conc") && conc.at("c_conc").is_number())
        return conc.at("c_conc").get<double>();
    static std::mutex mu;
    static double cached = -1.0;
    std::lock_guard<std::mutex> lock(mu);
    if (cached < 0.0) cached = measured_decay_constant();
    return cached;
}

void run_diagnostics(const json& manifest, const Trajectory& traj, double t_est,
                     const std::string& dir) {
    if (!manifest.contains("diagnostics")) return;
    const json type_i = manifest.contains("type_i") ? manifest.at("type_i") : json::object();
    const json conc = manifest.contains("concentration") ? manifest.at("concentration")
                                                         : json::object();
    for (const auto& name_j : manifest.at("diagnostics")) {
        const std::string name = name_j.get<std::string>();
        if (name == "omega") {
            write_trace_csv(omega_trace(traj), dir, "omega.csv", "omega");
        } else if (name == "rate") {
            write_trace_csv(rate_functional(traj, t_est), dir, "rate.csv", "rate");
        } else if (name == "type_i") {
            const double p = num_or(type_i, "p", 6.0);
            write_trace_csv(typeI_functional(traj, t_est, p), dir, "type_i.csv", "type_i");
        } else if (name == "energy") {
            std::ofstream os = open_out(dir, "energy.csv");
            os << "t,energy,dissipation,defect\n";
            const double e0 = traj.record(0).energy;
            for (std::size_t i = 0; i < traj.size(); ++i) {
                const StepRecord& r = traj.record(i);
                os << fmt(r.t) << "," << fmt(r.energy) << "," << fmt(r.dissipation) << ","
                   << fmt(e0 > 0 ? (r.energy + r.dissipation - e0) / e0 : 0.0) << "\n";
            }
        } else if (name == "concentration" || name == "dominance") {
            const double c_conc = resolve_c_conc(conc);
            const double M = num_or(conc, "M", 8.0);
            const double p = num_or(conc, "p", 6.0);
            const std::vector<double> taus =
                select_concentration_times(omega_trace(traj), c_conc);
            json report = json::array();
            for (double tau : taus) {
                // locate the stored step at tau
                std::size_t at = 0;
                for (std::size_t i = 0; i < traj.size(); ++i)
                    if (std::abs(traj.time(i) - tau) < 1e-12) at = i;
                const SpectralField& u = traj.field(at);
                const double omega = traj.record(at).omega;
                json entry;
                entry["tau"] = tau;
                entry["omega"] = omega;
                if (omega > 0.0) {
                    const DominanceResult dom = low_frequency_dominance(u, omega, c_conc);
                    entry["beta"] = dom.beta;
                    entry["dominance_ratio"] = dom.ratio;
                    entry["dominant"] = dom.dominant;
                    if (name == "concentration") {
                        try {
                            const ConcentrationResult cr =
                                locate_concentration(u, omega, p, M, c_conc);
                            entry["x_star"] = {cr.x_star[0], cr.x_star[1], cr.x_star[2]};
                            entry["local_mass"] = cr.local_mass;
                            entry["bound_ratio"] = cr.bound_ratio;
                            entry["radius"] = cr.radius;
                        } catch (const std::invalid_argument& e) {
                            entry["error"] = e.what();
                        }
                    }
                }
                report.push_back(entry);
            }
            std::ofstream os = open_out(dir, "concentration.json");
            os << report.dump(2) << "\n";
        } else if (name == "support") {
            std::ofstream os = open_out(dir, "support.csv");
            os << "t,support_xi1\n";
            for (std::size_t i = 0; i < traj.size(); ++i)
                os << fmt(traj.time(i)) << ","
                   << fmt(support_threshold_xi1(traj.field(i))) << "\n";
        } else {
            config_error("diagnostics", "unknown diagnostic '" + name + "'");
        }
    }
}

} // namespace

RunSummary run_scenario(const json& manifest, const std::string& out_dir) {
    const Grid grid = parse_grid(require(manifest, "grid", "manifest"));
    const std::uint64_t seed =
        manifest.contains("seed") ? manifest.at("seed").get<std::uint64_t>() : 0;
    SpectralField u0 =
        make_initial_data(grid, require(manifest, "initial_data", "manifest"), seed);
    SolverConfig cfg = parse_solver_config(
        manifest.contains("solver") ? manifest.at("solver") : json());
    const double t_horizon = num(manifest, "t_horizon", "manifest");

    const SolveResult result = solve_local(u0, t_horizon, cfg);

    RunSummary summary;
    summary.name = manifest.contains("name") ? manifest.at("name").get<std::string>() : "run";
    summary.status = result.status;
    summary.t_end = result.t_end;
    summary.t_est = result.t_est;
    summary.energy_defect = energy_identity_defect(result.trajectory);
    double max_div = 0.0;
    for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
        summary.max_omega = std::max(summary.max_omega, result.trajectory.record(i).omega);
        const SpectralField& f = result.trajectory.field(i);
        const double l2 = f.l2_norm();
        if (l2 > 0.0) max_div = std::max(max_div, f.divergence_max() / l2);
    }
    summary.max_divergence = max_div;

    write_steps_csv(result.trajectory, cfg, out_dir);
    const json output = manifest.contains("output") ? manifest.at("output") : json::object();
    if (!output.contains("save_trajectory") || output.at("save_trajectory").get<bool>()) {
        const int stride = int_or(output, "stride", 1);
        result.trajectory.save(out_dir + "/trajectory.mnst", stride);
    }
    const double t_est = std::isfinite(result.t_est)
                             ? result.t_est
                             : num_or(manifest, "t_est", result.t_end * 2.0);
    run_diagnostics(manifest, result.trajectory, t_est, out_dir);

    json js;
    js["name"] = summary.name;
    js["status"] = status_name(summary.status);
    js["message"] = result.message;
    js["t_end"] = summary.t_end;
    js["t_est"] = std::isfinite(summary.t_est) ? json(summary.t_est) : json("inf");
    js["blowup_declared_not_certified"] = summary.status == SolveStatus::BlowupDeclared;
    js["energy_defect"] = summary.energy_defect;
    js["max_omega"] = summary.max_omega;
    js["max_relative_divergence"] = summary.max_divergence;
    std::ofstream os = open_out(out_dir, "summary.json");
    os << js.dump(2) << "\n";
    return summary;
}

namespace {

void set_by_path(json& j, const std::string& path, const json& value) {
    json* cur = &j;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (dot == std::string::npos) {
            (*cur)[key] = value;
            return;
        }
        cur = &(*cur)[key];
        pos = dot + 1;
    }
}

} // namespace

void run_sweep(const json& manifest, const std::string& out_dir, int threads) {
    const json& tmpl = require(manifest, "template", "sweep");
    const json& axes = require(manifest, "sweep", "sweep");
    if (!axes.is_array() || axes.empty()) config_error("sweep.sweep", "must be a nonempty array");

    // cross product of all axis values
    std::vector<json> members;
    members.push_back(tmpl);
    std::vector<std::vector<std::pair<std::string, json>>> applied(1);
    for (const auto& axis : axes) {
        const std::string path = require(axis, "path", "sweep.axis").get<std::string>();
        const json& values = require(axis, "values", "sweep.axis");
        std::vector<json> next;
        std::vector<std::vector<std::pair<std::string, json>>> next_applied;
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (const auto& v : values) {
                json m = members[i];
                set_by_path(m, path, v);
                next.push_back(std::move(m));
                auto ap = applied[i];
                ap.emplace_back(path, v);
                next_applied.push_back(std::move(ap));
            }
        }
        members = std::move(next);
        applied = std::move(next_applied);
    }

    std::vector<RunSummary> summaries(members.size());
    std::vector<std::string> errors(members.size());
    std::vector<json> type_i_sup(members.size());
    const json type_i = tmpl.contains("type_i") ? tmpl.at("type_i") : json::object();
    const double p_typeI = num_or(type_i, "p", 6.0);

    std::mutex next_mutex;
    std::size_t next_index = 0;
    auto worker = [&]() {
        while (true) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(next_mutex);
                if (next_index >= members.size()) return;
                i = next_index++;
            }
            char dir[64];
            std::snprintf(dir, sizeof(dir), "member_%04zu", i);
            const std::string member_dir = out_dir + "/" + dir;
            try {
                summaries[i] = run_scenario(members[i], member_dir);
                // type-I functional tail for the minimal-quantity estimate
                if (summaries[i].status == SolveStatus::BlowupDeclared) {
                    Trajectory traj = Trajectory::load(member_dir + "/trajectory.mnst");
                    const Trace tr = typeI_functional(traj, summaries[i].t_est, p_typeI);
                    double sup_tail = 0.0;
                    const std::size_t start = 3 * tr.t.size() / 4;
                    for (std::size_t k = start; k < tr.t.size(); ++k)
                        sup_tail = std::max(sup_tail, tr.value[k]);
                    type_i_sup[i] = sup_tail;
                }
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::max(1, threads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::ofstream os = open_out(out_dir, "sweep.csv");
    os << "member";
    for (const auto& [path, v] : applied.front()) os << "," << path;
    os << ",status,t_end,t_est,max_omega,type_i_tail_sup,error\n";
    double m_c = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < members.size(); ++i) {
        os << i;
        for (const auto& [path, v] : applied[i]) os << "," << v.dump();
        if (!errors[i].empty()) {
            os << ",error,,,,," << "\"" << errors[i] << "\"\n";
            continue;
        }
        os << "," << status_name(summaries[i].status) << "," << fmt(summaries[i].t_end) << ","
           << fmt(summaries[i].t_est) << "," << fmt(summaries[i].max_omega) << ",";
        if (type_i_sup[i].is_number()) {
            const double v = type_i_sup[i].get<double>();
            os << fmt(v);
            m_c = std::min(m_c, v);
        }
        os << ",\n";
    }
    json summary;
    summary["members"] = members.size();
    summary["m_c_estimate"] = std::isfinite(m_c) ? json(m_c) : json(nullptr);
    summary["caveat"] =
        "minimal-quantity estimate over declared-blowup runs only; declaration is a heuristic "
        "stopping rule, not a certified singularity";
    std::ofstream ss = open_out(out_dir, "sweep_summary.json");
    ss << summary.dump(2) << "\n";
}

void run_analyze(const std::string& trajectory_path, const json& config,
                 const std::string& out_dir) {
    Trajectory traj = Trajectory::load(trajectory_path);
    const double t_est = num_or(config, "t_est", traj.last_time() * 2.0);
    run_diagnostics(config, traj, t_est, out_dir);
    json js;
    js["steps"] = traj.size();
    js["t_end"] = traj.last_time();
    js["energy_defect"] = energy_identity_defect(traj);
    std::ofstream os = open_out(out_dir, "analyze_summary.json");
    os << js.dump(2) << "\n";
}

json normalize_manifest(const json& manifest) {
    json out = manifest;
    if (!out.contains("name")) out["name"] = "run";
    if (!out.contains("seed")) out["seed"] = 0;
    if (out.contains("grid")) {
        json& g = out["grid"];
        if (!g.contains("lambda")) g["lambda"] = 1.0;
        if (!g.contains("dealias")) g["dealias"] = 2.0 / 3.0;
    }
    return out;
}

namespace {

struct CheckList {
    bool all = true;
    std::string lines;

    void check(bool ok, const std::string& what) {
        all = all && ok;
        lines += std::string(ok ? "PASS " : "FAIL ") + what + "\n";
    }
};

VerifyOutcome verify_cutoffs(const json& config, const std::string& out_dir) {
    CheckList cl;
    const Grid grid = config.contains("grid") ? parse_grid(config.at("grid")) : Grid(2, 64);
    const CutoffFamily fam = CutoffFamily::for_grid(grid);
    // partition of unity on the covered radius range
    double worst = 0.0;
    const double inv_lambda = 1.0 / grid.box_scale();
    for_each_mode(grid, [&](std::size_t, int k1, int k2, int k3) {
        const double r = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                                   static_cast<double>(k3) * k3) *
                         inv_lambda;
        if (r >= fam.full_coverage_lo() && r <= fam.full_coverage_hi())
            worst = std::max(worst, std::abs(fam.window_sum(r) - 1.0));
    });
    cl.check(worst <= 1e-12, "partition of unity on covered annulus, defect " + fmt(worst));

    // support containment: phi_j vanishes outside [2^{j-1}, 2^{j+1}]
    bool support_ok = true;
    for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
        for (double r = 0.0; r <= grid.n() / 2 * inv_lambda; r += 0.1) {
            const double lo = std::ldexp(1.0, j - 1), hi = std::ldexp(1.0, j + 1);
            if ((r < lo || r > hi) && fam.phi_j(j, r) != 0.0) support_ok = false;
        }
    }
    cl.check(support_ok, "block multiplier supports contained in [2^{j-1}, 2^{j+1}]");

    RandomFieldOptions ro;
    ro.seed = 7;
    ro.band_hi = grid.dealias_band();
    const SpectralField f = random_divfree(grid, ro);
    const DyadicBlockSet set = decompose(f);
    SpectralField recon = set.residual;
    for (const auto& [j, b] : set.blocks) recon += b;
    recon -= f;
    const double rel = std::sqrt(recon.spectral_mass() / f.spectral_mass());
    cl.check(rel <= 1e-11, "block + residual reconstruction, relative error " + fmt(rel));

    SpectralField lh = low_pass(f, 4.0);
    lh += high_pass(f, 4.0);
    lh -= f;
    const double rel2 = std::sqrt(lh.spectral_mass() / f.spectral_mass());
    cl.check(rel2 <= 1e-13, "low_pass + high_pass identity, relative error " + fmt(rel2));

    std::ofstream os = open_out(out_dir, "cutoffs.txt");
    os << cl.lines;
    return {cl.all, cl.lines};
}

VerifyOutcome verify_decay(const json& config, const std::string& out_dir) {
    CheckList cl;
    const int d = int_or(config, "d", 2);
    std::vector<int> ns;
    if (config.contains("N"))
        for (const auto& v : config.at("N")) ns.push_back(v.get<int>());
    else
        ns = {64, 128};
    const int j_lo = int_or(config, "j_lo", -2);
    const int j_hi = int_or(config, "j_hi", 5);
    const int count = int_or(config, "corpus", 3);
    const double variation_tol = num_or(config, "variation_tol", 0.2);

    std::ofstream os = open_out(out_dir, "decay.csv");
    os << "lemma,N,field,j,t,ratio\n";
    std::vector<double> sups;
    // Fields are drawn once on the coarsest grid and embedded spectrally, so
    // every refinement level sees the same continuum field.
    std::vector<SpectralField> base_fields;
    for (int m = 0; m < count; ++m) {
        RandomFieldOptions ro;
        ro.seed = 1000 + static_cast<std::uint64_t>(m);
        ro.spectrum_slope = 0.0;
        ro.band_lo = 1.0;
        ro.band_hi = Grid(d, ns.front(), 1.0).dealias_band();
        base_fields.push_back(random_divfree(Grid(d, ns.front(), 1.0), ro));
    }
    for (int n : ns) {
        Grid grid(d, n, 1.0);
        if (n % ns.front() != 0) config_error("N", "entries must be multiples of the first");
        double sup_n = 0.0;
        for (int m = 0; m < count; ++m) {
            const SpectralField f =
                n == ns.front() ? base_fields[static_cast<std::size_t>(m)]
                                : upsample(base_fields[static_cast<std::size_t>(m)],
                                           n / ns.front());
            for (int j = j_lo; j <= j_hi; ++j) {
                CutoffFamily fam(std::min(j, grid.default_j_min()),
                                 std::max(j, grid.default_j_max()));
                std::vector<double> ts;
                for (int i = 0; i < 9; ++i) ts.push_back(4.0 * std::ldexp(1.0, -2 * j) * i / 8.0);
                for (double r : {2.0, kInf}) {
                    const RatioTrace tr = verify_exp_decay(f, j, r, ts, fam);
                    for (std::size_t q = 0; q < tr.t.size(); ++q)
                        os << "exp_decay," << n << "," << m << "," << j << "," << fmt(tr.t[q])
                           << "," << fmt(tr.ratio[q]) << "\n";
                    sup_n = std::max(sup_n, tr.sup);
                }
            }
        }
        sups.push_back(sup_n);
        cl.check(std::isfinite(sup_n) && sup_n > 0.0,
                 "sup ratio finite at N = " + std::to_string(n) + ": " + fmt(sup_n));
    }
    if (sups.size() >= 2) {
        const double var = std::abs(sups[1] - sups[0]) / sups[0];
        cl.check(var <= variation_tol,
                 "sup ratio stable under refinement, variation " + fmt(var));
    }
    std::ofstream rep = open_out(out_dir, "decay.txt");
    rep << cl.lines;
    return {cl.all, cl.lines};
}

VerifyOutcome verify_heat_spacetime_suite(const json& config, const std::string& out_dir) {
    CheckList cl;
    const int d = int_or(config, "d", 3);
    const int n = int_or(config, "N", 32);
    const int count = int_or(config, "corpus", 5);
    Grid grid(d, n, 1.0);
    std::ofstream os = open_out(out_dir, "heat_spacetime.csv");
    os << "field,a,r,p,gamma,ratio\n";
    // exponent families satisfying 2/gamma = a + d(1/r - 1/p)
    struct Cfg { double a, r, p, gamma; };
    std::vector<Cfg> cfgs = {{0.0, 2.0, 2.0, kInf},
                             {0.5, 2.0, 2.0, 4.0},
                             {0.0, 3.0, 6.0, 2.0 / (d * (1.0 / 3.0 - 1.0 / 6.0))}};
    double sup = 0.0;
    for (int m = 0; m < count; ++m) {
        RandomFieldOptions ro;
        ro.seed = 500 + static_cast<std::uint64_t>(m);
        const SpectralField f = random_divfree(grid, ro);
        for (const auto& c : cfgs) {
            const double ratio = verify_heat_spacetime(f, c.a, c.r, c.p, c.gamma);
            os << m << "," << fmt(c.a) << "," << fmt(c.r) << "," << fmt(c.p) << ","
               << fmt(c.gamma) << "," << fmt(ratio) << "\n";
            sup = std::max(sup, ratio);
            cl.check(std::isfinite(ratio) && ratio > 0.0,
                     "ratio finite for (a,r,p,gamma) = (" + fmt(c.a) + "," + fmt(c.r) + "," +
                         fmt(c.p) + "," + fmt(c.gamma) + "): " + fmt(ratio));
        }
    }
    std::ofstream rep = open_out(out_dir, "heat_spacetime.txt");
    rep << cl.lines;
    return {cl.all, cl.lines};
}

VerifyOutcome verify_support(const json& config, const std::string& out_dir) {
    CheckList cl;
    const int d = int_or(config, "d", 3);
    const int n = int_or(config, "N", 64);
    const int L = int_or(config, "L", 3);
    const double c = num_or(config, "c", 0.05);
    const int n_max = int_or(config, "n_max", 3);
    // box scale 1/2: several lattice modes per axis inside the data band and
    // the n-fold convolution supports stay inside the dealias band
    Grid grid(d, n, num_or(config, "lambda", 0.5));
    const SpectralField u0 = half_space_data(grid, L, c);
    const double rho = half_space_rho(L);
    PicardConfig pc;
    pc.t_horizon = num_or(config, "t_probe", 1.0);
    pc.lattice_nodes = int_or(config, "lattice_nodes", 9);
    pc.t_min = num_or(config, "t_min", 1e-4);
    pc.gl_nodes = int_or(config, "gl_nodes", 8);
    const SupportTrackResult tr = frequency_support_tracker(u0, rho, n_max, pc);
    std::ofstream os = open_out(out_dir, "support.csv");
    os << "n,threshold,expected_min,outside_fraction\n";
    for (std::size_t i = 0; i < tr.thresholds.size(); ++i) {
        os << i << "," << fmt(tr.thresholds[i]) << "," << fmt((i + 1) * rho) << ","
           << fmt(tr.outside_fractions[i]) << "\n";
        cl.check(tr.outside_fractions[i] <= 1e-8,
                 "diff " + std::to_string(i) + " mass outside {xi_1 >= " +
                     fmt((i + 1) * rho) + "}: " + fmt(tr.outside_fractions[i]));
    }
    std::ofstream rep = open_out(out_dir, "support.txt");
    rep << cl.lines;
    return {cl.all, cl.lines};
}

VerifyOutcome verify_global_criterion(const json& config, const std::string& out_dir) {
    CheckList cl;
    const int d = int_or(config, "d", 3);
    const int n = int_or(config, "N", 64);
    const int L = int_or(config, "L", 3);
    Grid grid(d, n, num_or(config, "lambda", 0.5));
    const double rho = half_space_rho(L);
    const double c_glob = config.contains("c_glob") && config.at("c_glob").is_number()
                              ? config.at("c_glob").get<double>()
                              : measured_decay_constant();
    // pick c so that 4 C |u0|_inf <= rho holds with margin 2 by default
    double c = num_or(config, "c", -1.0);
    if (c <= 0.0) {
        const SpectralField unit = half_space_data(grid, L, 1.0);
        c = rho / (4.0 * c_glob * sup_norm(unit)) / 2.0;
    }
    const SpectralField u0 = half_space_data(grid, L, c);
    PicardConfig pc;
    pc.t_horizon = num_or(config, "t_probe", 1.0);
    pc.lattice_nodes = int_or(config, "lattice_nodes", 9);
    pc.t_min = num_or(config, "t_min", 1e-4);
    pc.gl_nodes = int_or(config, "gl_nodes", 8);
    const GlobalCriterionResult res =
        check_global_criterion(u0, rho, int_or(config, "n0_max", 2), c_glob, pc);
    cl.check(res.satisfied, "criterion satisfied at n0 = " + std::to_string(res.best_n0) +
                                ", margin " + fmt(res.margin));
    if (res.satisfied)
        cl.check(res.decay_ok, "geometric decay of successive differences past n0");
    json js;
    js["satisfied"] = res.satisfied;
    js["best_n0"] = res.best_n0;
    js["margin"] = res.margin;
    js["decay_ok"] = res.decay_ok;
    js["m_quantities"] = res.m_quantities;
    js["diff_sups"] = res.diff_sups;
    js["decay_ratios"] = res.decay_ratios;
    js["t_probe"] = res.t_probe;
    js["c_glob"] = res.c_glob;
    js["caveat"] = "finite probe window; no claim about the t -> infinity tail";
    std::ofstream os = open_out(out_dir, "global_criterion.json");
    os << js.dump(2) << "\n";
    std::ofstream rep = open_out(out_dir, "global_criterion.txt");
    rep << cl.lines;
    return {cl.all, cl.lines};
}

// Decomposition spec: profiles by generator name + parameters, scale/core
// schedules as functions of n, optional band-limited remainder.
ProfileDecomposition parse_decomposition(const json& spec, const Grid& grid) {
    const double p = num_or(spec, "p", 3.0);
    const std::string frame =
        spec.contains("frame") ? spec.at("frame").get<std::string>() : "lp";
    const double alpha = frame == "sobolev" ? 1.0 : grid.dim() / p;
    ProfileDecomposition decomp(grid, alpha);
    if (!spec.contains("profiles") || !spec.at("profiles").is_array())
        config_error("decomposition.profiles", "must be an array");
    for (const auto& pj : spec.at("profiles")) {
        ProfileEntry e;
        const std::string gen =
            pj.contains("generator") ? pj.at("generator").get<std::string>() : "gaussian";
        if (gen == "gaussian") {
            e.shape.kind = ProfileShape::Kind::Gaussian;
        } else if (gen == "modulated_gaussian") {
            e.shape.kind = ProfileShape::Kind::ModulatedGaussian;
            e.shape.mod_k = num_or(pj, "mod_k", 4.0);
        } else {
            config_error("decomposition.profiles.generator", "unknown generator '" + gen + "'");
        }
        e.shape.amplitude = num_or(pj, "amplitude", 1.0);
        e.shape.width = num_or(pj, "width", 0.5);
        e.shape.direction = int_or(pj, "direction", 0);
        const std::string kind =
            pj.contains("scale") ? pj.at("scale").get<std::string>() : "constant";
        if (kind == "constant")
            e.scale.kind = ScaleSchedule::Kind::Constant;
        else if (kind == "shrinking")
            e.scale.kind = ScaleSchedule::Kind::Shrinking;
        else if (kind == "growing")
            e.scale.kind = ScaleSchedule::Kind::Growing;
        else
            config_error("decomposition.profiles.scale", "unknown schedule '" + kind + "'");
        e.scale.base = num_or(pj, "scale_base", 1.0);
        e.scale.rate = num_or(pj, "scale_rate", 1.0);
        if (pj.contains("core"))
            for (std::size_t a = 0; a < pj.at("core").size() && a < 3; ++a)
                e.core.base[a] = pj.at("core")[a].get<double>();
        if (pj.contains("core_drift"))
            for (std::size_t a = 0; a < pj.at("core_drift").size() && a < 3; ++a)
                e.core.drift[a] = pj.at("core_drift")[a].get<double>();
        decomp.add_profile(e);
    }
    if (spec.contains("remainder")) {
        const json& rj = spec.at("remainder");
        RemainderSpec rem;
        rem.amplitude = num_or(rj, "amplitude", 0.0);
        rem.decay_rate = num_or(rj, "decay_rate", 0.5);
        rem.band_lo = num_or(rj, "band_lo", rem.band_lo);
        rem.band_hi = num_or(rj, "band_hi", rem.band_hi);
        if (rj.contains("seed")) rem.seed = rj.at("seed").get<std::uint64_t>();
        decomp.set_remainder(rem);
    }
    return decomp;
}

VerifyOutcome verify_profiles(const json& config, const std::string& out_dir) {
    CheckList cl;
    const int n = int_or(config, "N", 128);
    Grid grid(2, n, num_or(config, "lambda", 8.0));
    const double p = num_or(config, "p", 3.0);
    ProfileDecomposition decomp = [&] {
        if (config.contains("decomposition"))
            return parse_decomposition(config.at("decomposition"), grid);
        json spec;
        spec["p"] = p;
        spec["profiles"] = json::array({
            json{{"amplitude", 1.0}, {"width", 0.6}, {"scale_base", 1.0},
                 {"core", {8.0, 8.0}}},
            json{{"amplitude", 0.8}, {"width", 0.6}, {"scale_base", 0.5},
                 {"core", {25.0, 25.0}}},
            json{{"amplitude", 1.2}, {"width", 0.6}, {"scale_base", 2.0},
                 {"core", {40.0, 12.0}}},
        });
        return parse_decomposition(spec, grid);
    }();

    // per-check report
    std::ofstream report_csv = open_out(out_dir, "profiles_report.csv");
    report_csv << "check,n,value\n";
    const int n_values = int_or(config, "n_values", 4);
    for (int i = 0; i < n_values; ++i) {
        double min_orth = std::numeric_limits<double>::infinity();
        const auto m = decomp.orthogonality_matrix(i, decomp.count());
        for (int j = 0; j < decomp.count(); ++j)
            for (int k = 0; k < decomp.count(); ++k)
                if (j != k) min_orth = std::min(min_orth, m[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
        if (decomp.count() > 1)
            report_csv << "orthogonality_min," << i << "," << fmt(min_orth) << "\n";
        const SplittingCheck sp = norm_splitting_check(decomp, i, decomp.count(), p);
        report_csv << "splitting_gap," << i << "," << fmt(sp.gap) << "\n";
    }
    std::vector<SpectralField> seq;
    for (int i = 0; i < 6; ++i) {
        try {
            seq.push_back(decomp.synthesize(i, decomp.count()));
        } catch (const std::invalid_argument&) {
            if (seq.size() >= 2) break; // schedule left the representable band
            throw;
        }
    }
    const ExtractionResult ex =
        greedy_extract(seq, decomp.count(), {.p = p, .bump_width = 0.6});
    cl.check(static_cast<int>(ex.profiles.size()) == decomp.count(),
             "recovered " + std::to_string(decomp.count()) + " profiles");
    // match by nearest core at the last synthesized index
    const int n_last = static_cast<int>(seq.size()) - 1;
    int matched = 0;
    for (int j = 0; j < decomp.count(); ++j) {
        const auto truth_core = decomp.core_at(j, n_last);
        const double truth_scale = decomp.scale_at(j, n_last);
        for (const auto& prof : ex.profiles) {
            const double dx = std::hypot(prof.core.back()[0] - truth_core[0],
                                         prof.core.back()[1] - truth_core[1]);
            const double ratio = prof.lambda.back() / truth_scale;
            if (dx <= truth_scale && ratio >= 0.5 && ratio <= 2.0) {
                ++matched;
                break;
            }
        }
    }
    cl.check(matched == decomp.count(),
             "scales within factor 2 and cores within one scale unit, matched " +
                 std::to_string(matched) + "/" + std::to_string(decomp.count()));

    ProfileDecomposition single(grid, 2.0 / p);
    {
        ProfileEntry e;
        e.shape.amplitude = 1.0;
        e.shape.width = 0.6;
        e.core.base = {0.0, 0.0, 0.0};
        single.add_profile(e);
    }
    const SplittingCheck sc = norm_splitting_check(single, 0, 1, p);
    cl.check(std::abs(sc.gap) <= 1e-10 * std::max(1.0, sc.rhs),
             "single-profile norm splitting gap " + fmt(sc.gap));

    const ElementaryIneqCheck ei = elementary_inequality_check({1.0, -1.0}, 2.0);
    cl.check(ei.lhs == 2.0 && ei.rhs == 2.0,
             "elementary inequality hand case lhs = " + fmt(ei.lhs) + ", rhs = " + fmt(ei.rhs));

    std::ofstream rep = open_out(out_dir, "profiles.txt");
    rep << cl.lines;
    return {cl.all, cl.lines};
}

} // namespace

VerifyOutcome run_verify(const std::string& suite, const json& config,
                         const std::string& out_dir) {
    if (suite == "cutoffs") return verify_cutoffs(config, out_dir);
    if (suite == "decay") return verify_decay(config, out_dir);
    if (suite == "heat_spacetime") return verify_heat_spacetime_suite(config, out_dir);
    if (suite == "support") return verify_support(config, out_dir);
    if (suite == "global_criterion") return verify_global_criterion(config, out_dir);
    if (suite == "profiles") return verify_profiles(config, out_dir);
    throw std::invalid_argument(
        "verify: unknown suite '" + suite +
        "' (expected cutoffs|decay|heat_spacetime|support|global_criterion|profiles)");
}

} // namespace mns
