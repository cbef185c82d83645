#include <CLI11.hpp>
#include <json.hpp>

#include "laplab/analysis.hpp"
#include "laplab/block_dla.hpp"
#include "laplab/dbm_flow.hpp"
#include "laplab/io.hpp"
#include "laplab/nrm_ensemble.hpp"
#include "laplab/pg_exact.hpp"
#include "laplab/potential_theory.hpp"
#include "laplab/weak_lg.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fs = std::filesystem;
using namespace laplab;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double pi = std::numbers::pi;

std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("config: key " + key + " is not a number list: " + text);
        }
    }
    if (out.empty()) throw std::invalid_argument("config: key " + key + " is empty");
    return out;
}

std::vector<cplx> to_complex(const std::vector<double>& reals) {
    return {reals.begin(), reals.end()};
}

fs::path prepare_out_dir(const KeyValues& kv, const std::string& command) {
    const fs::path dir =
        fs::path(get_string(kv, "out", (default_output_root() / command).string()));
    fs::create_directories(dir);
    return dir;
}

struct RunContext {
    fs::path dir;
    RunManifest man;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    RunContext(const std::string& command, const KeyValues& kv)
        : dir(prepare_out_dir(kv, command)) {
        man.command = command;
        man.version = kVersion;
        man.config = kv;
        man.seed = get_u64(kv, "seed", 0);
    }

    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<double>>& rows) {
        write_csv(dir / name, header, rows);
        manifest_add_file(man, dir, name);
    }

    void raw(const std::string& name, const std::string& bytes) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + (dir / name).string());
        out << bytes;
        out.close();
        manifest_add_file(man, dir, name);
    }

    void diag(const std::string& key, const std::string& value) {
        man.diagnostics[key] = value;
    }
    void diag(const std::string& key, double value) { diag(key, format_full(value)); }

    void finish() {
        man.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_manifest(dir / "manifest.json", man);
    }
};

std::vector<std::vector<double>> boundary_rows(double t, const PolyMap& map, std::size_t M) {
    const BoundarySample bs = derivative_on_circle(map, M);
    std::vector<std::vector<double>> rows;
    for (cplx p : bs.points) rows.push_back({t, p.real(), p.imag()});
    return rows;
}

// ---------------------------------------------------------------- commands

void run_pg(const KeyValues& kv) {
    require_keys(kv, {"a1", "a2", "a3", "direction", "t_end", "dt", "out", "seed"});
    RunContext ctx("pg", kv);
    std::vector<cplx> coeffs = {get_double(kv, "a1", 1.0), get_double(kv, "a2", 0.1),
                                get_double(kv, "a3", 0.0)};
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    const std::string dir = get_string(kv, "direction", "suction");
    if (dir != "suction" && dir != "injection")
        throw std::invalid_argument("config: direction must be suction or injection");
    const double rate = dir == "suction" ? -2.0 * pi : 2.0 * pi;

    const PGState init = make_pg_state(PolyMap::interior(coeffs), rate);
    const PGTrajectory traj =
        pg_run(init, get_double(kv, "t_end", 1.0), get_double(kv, "dt", 1e-3));
    ctx.raw("trajectory.csv", pg_trajectory_csv(traj));

    std::vector<std::vector<double>> brows;
    for (const auto& st : traj.states) {
        auto rows = boundary_rows(st.t, st.map, 256);
        brows.insert(brows.end(), rows.begin(), rows.end());
    }
    ctx.csv("boundaries.csv", {"t", "x", "y"}, brows);

    const CuspReport cusp = cusp_time(init);
    ctx.diag("cusp_time", cusp.t_c);
    ctx.diag("final_t", traj.states.back().t);
    ctx.diag("final_min_fprime", traj.min_fprime.back());
    ctx.finish();
}

void run_dbm(const KeyValues& kv) {
    require_keys(kv, {"alpha", "sigma", "M", "dt", "t_end", "snapshot_every", "coeffs",
                      "orientation", "out", "seed"});
    RunContext ctx("dbm", kv);
    DBMConfig cfg;
    cfg.alpha = get_double(kv, "alpha", 2.0);
    cfg.sigma = get_double(kv, "sigma", 0.0);
    cfg.M = std::size_t(get_u64(kv, "M", 256));
    cfg.dt = get_double(kv, "dt", 1e-3);
    cfg.t_end = get_double(kv, "t_end", 1.0);
    cfg.snapshot_every = get_double(kv, "snapshot_every", 0.0);
    cfg.validate();

    const std::string ori = get_string(kv, "orientation", "interior");
    if (ori != "interior" && ori != "exterior")
        throw std::invalid_argument("config: orientation must be interior or exterior");
    const auto coeffs = to_complex(parse_real_list("coeffs", get_string(kv, "coeffs", "1")));
    const PolyMap init(ori == "interior" ? Orientation::interior : Orientation::exterior,
                       coeffs);

    const DBMTrajectory traj = dbm_evolve(init, cfg);
    std::size_t width = 0;
    for (const auto& s : traj.snapshots) width = std::max(width, s.map.coeffs.size());
    std::vector<std::string> header = {"t"};
    for (std::size_t k = 0; k < width; ++k) {
        header.push_back("c" + std::to_string(k) + "_re");
        header.push_back("c" + std::to_string(k) + "_im");
    }
    std::vector<std::vector<double>> rows;
    for (const auto& s : traj.snapshots) {
        std::vector<double> row = {s.t};
        for (std::size_t k = 0; k < width; ++k) {
            const cplx c = k < s.map.coeffs.size() ? s.map.coeffs[k] : 0.0;
            row.push_back(c.real());
            row.push_back(c.imag());
        }
        rows.push_back(std::move(row));
    }
    ctx.csv("snapshots.csv", header, rows);

    std::vector<std::vector<double>> brows;
    for (const auto& s : traj.snapshots) {
        auto b = boundary_rows(s.t, s.map, 256);
        brows.insert(brows.end(), b.begin(), b.end());
    }
    ctx.csv("boundaries.csv", {"t", "x", "y"}, brows);

    const int m = std::max<int>(1, int(init.coeffs.size()) - 1);
    ctx.diag("moment_drift", moment_drift(traj, m));
    ctx.diag("hit_singularity", traj.hit_singularity ? "true" : "false");
    ctx.diag("final_t", traj.snapshots.back().t);
    ctx.finish();
}

void run_blockdla(const KeyValues& kv) {
    require_keys(kv, {"N", "K", "epsilon", "steps", "seed", "M", "length_weighted", "coeffs",
                      "out"});
    RunContext ctx("blockdla", kv);
    BlockModelConfig cfg;
    cfg.N = std::size_t(get_u64(kv, "N", 64));
    cfg.K = std::size_t(get_u64(kv, "K", 64));
    cfg.epsilon = get_double(kv, "epsilon", 1e-5);
    cfg.steps = std::size_t(get_u64(kv, "steps", 100));
    cfg.seed = get_u64(kv, "seed", 0);
    cfg.M = std::size_t(get_u64(kv, "M", 256));
    cfg.length_weighted = get_u64(kv, "length_weighted", 0) != 0;
    cfg.validate();

    const auto coeffs = to_complex(parse_real_list("coeffs", get_string(kv, "coeffs", "1")));
    const BlockTrajectory traj = run_aggregation(cfg, PolyMap::interior(coeffs));

    std::vector<std::vector<double>> rows;
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s)
        rows.push_back({double(s), traj.area[s], traj.min_fprime[s]});
    ctx.csv("series.csv", {"step", "area", "min_fprime"}, rows);

    std::vector<std::vector<double>> hist;
    for (std::size_t k = 0; k < traj.k_counts.size(); ++k)
        hist.push_back({double(k), double(traj.k_counts[k])});
    ctx.csv("k_hist.csv", {"k", "count"}, hist);

    const BoundarySample bs = derivative_on_circle(traj.snapshots.back(), 2048);
    std::vector<std::vector<double>> brows;
    for (cplx p : bs.points) brows.push_back({p.real(), p.imag()});
    ctx.csv("boundary_final.csv", {"x", "y"}, brows);

    double diam = 0.0;
    for (cplx p : bs.points) diam = std::max(diam, std::abs(p));
    std::vector<double> scales;
    for (double f : {0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.25}) scales.push_back(2.0 * diam * f);
    const DimensionFit fit = box_counting_dimension(bs.points, scales);
    ctx.diag("box_dimension", fit.dimension);
    ctx.diag("box_dimension_r2", fit.r_squared);
    ctx.diag("kappa", cfg.kappa());
    ctx.diag("total_draws", double(traj.total_draws));
    ctx.diag("hit_singularity", traj.hit_singularity ? "true" : "false");
    ctx.finish();
}

std::vector<cplx> make_cloud(const std::string& shape, std::size_t points) {
    std::vector<cplx> cloud;
    if (shape == "circle") {
        for (std::size_t k = 0; k < points; ++k)
            cloud.push_back(std::polar(1.0, 2.0 * pi * double(k) / double(points)));
    } else if (shape == "segment") {
        for (std::size_t k = 0; k < points; ++k)
            cloud.push_back(cplx(-1.0 + 2.0 * double(k) / double(points - 1), 0.0));
    } else if (shape == "disk") {
        const std::size_t rings = std::max<std::size_t>(2, std::size_t(std::sqrt(double(points) / pi)));
        cloud.push_back(0.0);
        for (std::size_t r = 1; r <= rings; ++r) {
            const double rad = double(r) / double(rings);
            const std::size_t m = std::max<std::size_t>(6, std::size_t(2.0 * pi * rad * double(rings)));
            for (std::size_t k = 0; k < m; ++k)
                cloud.push_back(std::polar(rad, 2.0 * pi * double(k) / double(m)));
        }
    } else {
        throw std::invalid_argument("config: shape must be circle, segment or disk");
    }
    return cloud;
}

void run_fekete(const KeyValues& kv) {
    require_keys(kv, {"shape", "points", "n", "n_max", "seed", "out"});
    RunContext ctx("fekete", kv);
    const auto cloud = make_cloud(get_string(kv, "shape", "circle"),
                                  std::size_t(get_u64(kv, "points", 1024)));
    const std::size_t n = std::size_t(get_u64(kv, "n", 8));
    const std::size_t n_max = std::size_t(get_u64(kv, "n_max", 24));

    const FeketeResult fek = fekete_points(cloud, n, get_u64(kv, "seed", 0));
    std::vector<std::vector<double>> rows;
    for (cplx p : fek.points) rows.push_back({p.real(), p.imag()});
    ctx.csv("fekete.csv", {"x", "y"}, rows);

    const TransfiniteReport rep = transfinite_diameter(cloud, n_max);
    std::vector<std::vector<double>> drows;
    for (std::size_t i = 0; i < rep.d_n.size(); ++i)
        drows.push_back({double(i + 2), rep.d_n[i]});
    ctx.csv("transfinite.csv", {"n", "d_n"}, drows);

    ctx.diag("log_delta", fek.log_delta);
    ctx.diag("cap", rep.cap);
    ctx.diag("monotone", rep.monotone ? "true" : "false");
    ctx.finish();
}

void run_equilibrium(const KeyValues& kv) {
    require_keys(kv, {"t", "n", "V", "constrained", "lo", "hi", "max_iters", "out", "seed"});
    RunContext ctx("equilibrium", kv);
    const auto vc = parse_real_list("V", get_string(kv, "V", "0,0,1"));
    auto V = [vc](double x) {
        double s = 0.0;
        for (std::size_t k = vc.size(); k-- > 0;) s = s * x + vc[k];
        return s;
    };
    auto Vp = [vc](double x) {
        double s = 0.0;
        for (std::size_t k = vc.size(); k-- > 1;) s = s * x + double(k) * vc[k];
        return s;
    };
    Equilibrium1DConfig cfg;
    cfg.t = get_double(kv, "t", 1.0);
    cfg.n = std::size_t(get_u64(kv, "n", 200));
    cfg.max_iters = std::size_t(get_u64(kv, "max_iters", cfg.max_iters));
    cfg.constrained = get_u64(kv, "constrained", 0) != 0;
    cfg.lo = get_double(kv, "lo", -1.0);
    cfg.hi = get_double(kv, "hi", 1.0);

    const Equilibrium1DResult eq = equilibrium_measure_1d(V, Vp, cfg);
    std::vector<std::vector<double>> rows;
    for (double x : eq.x) rows.push_back({x, eq.w});
    ctx.csv("atoms.csv", {"x", "w"}, rows);
    ctx.diag("energy", eq.energy);
    ctx.diag("u_t", eq.u_t);
    ctx.diag("grad_residual", eq.grad_residual);
    ctx.diag("support_lo", eq.support_lo);
    ctx.diag("support_hi", eq.support_hi);
    ctx.diag("converged", eq.converged ? "true" : "false");
    ctx.finish();
    if (!eq.converged)
        throw NonConvergenceError("equilibrium: gradient descent did not converge",
                                  eq.grad_residual);
}

DiscreteMeasure load_measure(const KeyValues& kv) {
    DiscreteMeasure mu;
    if (kv.count("mu_csv")) {
        const auto rows = read_csv(get_string(kv, "mu_csv", ""));
        for (const auto& row : rows) {
            if (row.size() != 3)
                throw std::invalid_argument("config: mu_csv rows must be x,y,w");
            mu.points.push_back(cplx(row[0], row[1]));
            mu.weights.push_back(row[2]);
        }
    } else {
        // inline triples x,y,w;x,y,w
        std::stringstream ss(get_string(kv, "mu", "0,0,1"));
        std::string atom;
        while (std::getline(ss, atom, ';')) {
            const auto vals = parse_real_list("mu", atom);
            if (vals.size() != 3) throw std::invalid_argument("config: mu atoms must be x,y,w");
            mu.points.push_back(cplx(vals[0], vals[1]));
            mu.weights.push_back(vals[2]);
        }
    }
    if (mu.points.empty()) throw std::invalid_argument("config: mu is empty");
    return mu;
}

std::string frontier_svg(const GrowthFrontier& fr, const DiscreteMeasure& mu,
                         const GridSpec& grid) {
    std::ostringstream svg;
    const double w = grid.x1 - grid.x0, h = grid.y1 - grid.y0;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << grid.x0 << ' '
        << -grid.y1 << ' ' << w << ' ' << h << "\">\n";
    for (const auto& comp : fr.components) {
        svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << 0.004 * w
            << "\" points=\"";
        for (cplx p : comp) svg << p.real() << ',' << -p.imag() << ' ';
        svg << "\"/>\n";
    }
    for (cplx p : mu.points)
        svg << "<circle cx=\"" << p.real() << "\" cy=\"" << -p.imag() << "\" r=\"" << 0.006 * w
            << "\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

void run_weak(const KeyValues& kv) {
    require_keys(kv, {"vq", "mu", "mu_csv", "x0", "x1", "y0", "y1", "nx", "ny", "tol", "svg",
                      "out", "seed"});
    RunContext ctx("weak", kv);
    const double vq = get_double(kv, "vq", -0.5);  // V = vq |z|^2
    PsiField field;
    field.V = [vq](cplx z) { return vq * std::norm(z); };
    field.dV = [vq](cplx z) { return 2.0 * vq * std::conj(z); };
    field.mu = load_measure(kv);
    field.grid.x0 = get_double(kv, "x0", -2.0);
    field.grid.x1 = get_double(kv, "x1", 2.0);
    field.grid.y0 = get_double(kv, "y0", -2.0);
    field.grid.y1 = get_double(kv, "y1", 2.0);
    field.grid.nx = std::size_t(get_u64(kv, "nx", 128));
    field.grid.ny = std::size_t(get_u64(kv, "ny", 128));

    const GrowthFrontier fr = weak_boundary(field, get_double(kv, "tol", 1e-2));
    std::vector<std::vector<double>> rows;
    for (std::size_t c = 0; c < fr.components.size(); ++c)
        for (cplx p : fr.components[c])
            rows.push_back({double(c), fr.closed[c] ? 1.0 : 0.0, p.real(), p.imag()});
    ctx.csv("frontier.csv", {"component", "closed", "x", "y"}, rows);
    if (get_u64(kv, "svg", 0) != 0)
        ctx.raw("frontier.svg", frontier_svg(fr, field.mu, field.grid));
    ctx.diag("components", double(fr.components.size()));
    ctx.diag("rejected", double(fr.rejected));
    ctx.finish();
}

void run_nrm(const KeyValues& kv) {
    require_keys(kv, {"t0", "tk", "n", "N", "sweeps", "thin", "seed", "x0", "x1", "y0", "y1",
                      "nx", "ny", "out"});
    RunContext ctx("nrm", kv);
    std::vector<double> tk;
    if (kv.count("tk")) tk = parse_real_list("tk", get_string(kv, "tk", ""));
    const NRMPotential pot = nrm_potential(get_double(kv, "t0", 1.0), tk);

    ChainConfig cfg;
    cfg.n = std::size_t(get_u64(kv, "n", 32));
    cfg.N = std::size_t(get_u64(kv, "N", 32));
    cfg.sweeps = std::size_t(get_u64(kv, "sweeps", 4000));
    cfg.thin = std::size_t(get_u64(kv, "thin", 10));
    cfg.seed = get_u64(kv, "seed", 1);
    const ChainResult res = metropolis_sample(pot, cfg);
    if (res.acceptance < 0.1 || res.acceptance > 0.7)
        throw NonConvergenceError("nrm: acceptance rate out of the production band",
                                  res.acceptance);

    HistGrid grid;
    grid.x0 = get_double(kv, "x0", -1.5);
    grid.x1 = get_double(kv, "x1", 1.5);
    grid.y0 = get_double(kv, "y0", -1.5);
    grid.y1 = get_double(kv, "y1", 1.5);
    grid.nx = std::size_t(get_u64(kv, "nx", 60));
    grid.ny = std::size_t(get_u64(kv, "ny", 60));
    const DensityField rho = density_histogram(res.samples, grid, double(cfg.N));

    std::vector<std::string> header;
    for (std::size_t i = 0; i < grid.nx; ++i) header.push_back("x" + std::to_string(i));
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < grid.ny; ++j)
        rows.emplace_back(rho.rho.begin() + j * grid.nx, rho.rho.begin() + (j + 1) * grid.nx);
    ctx.csv("histogram.csv", header, rows);

    nlohmann::ordered_json chain;
    chain["acceptance"] = res.acceptance;
    chain["step"] = res.step;
    chain["sweeps"] = res.sweeps;
    chain["samples"] = res.samples.size();
    chain["seed"] = res.seed;
    chain["histogram_mass"] = rho.mass;
    ctx.raw("chain.json", chain.dump(2) + "\n");

    ctx.diag("acceptance", res.acceptance);
    ctx.diag("histogram_mass", rho.mass);
    ctx.finish();
}

std::vector<BoundarySnapshot> load_snapshots(const std::string& path) {
    std::vector<std::string> header;
    const auto rows = read_csv(path, &header);
    if (header.size() < 3 || header[0] != "t")
        throw std::invalid_argument("compare: expected t,x,y columns in " + path);
    std::vector<BoundarySnapshot> snaps;
    for (const auto& row : rows) {
        if (snaps.empty() || row[0] != snaps.back().t) snaps.push_back({row[0], {}, {}});
        snaps.back().points.push_back(cplx(row[1], row[2]));
    }
    return snaps;
}

void run_compare(const KeyValues& kv) {
    require_keys(kv, {"a", "b", "dimension", "out", "seed"});
    RunContext ctx("compare", kv);
    if (kv.count("dimension")) {
        const auto rows = read_csv(get_string(kv, "dimension", ""));
        std::vector<cplx> pts;
        for (const auto& row : rows) {
            if (row.size() < 2) throw std::invalid_argument("compare: dimension rows must be x,y");
            pts.push_back(cplx(row[0], row[1]));
        }
        double diam = 1e-30;
        for (cplx p : pts)
            for (cplx q : {pts.front(), pts.back()}) diam = std::max(diam, std::abs(p - q));
        std::vector<double> scales;
        for (double f : {0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.25}) scales.push_back(diam * f);
        const DimensionFit fit = box_counting_dimension(pts, scales);
        std::vector<std::vector<double>> out;
        for (std::size_t k = 0; k < fit.scales.size(); ++k)
            out.push_back({fit.scales[k], fit.counts[k], fit.residuals[k]});
        ctx.csv("dimension.csv", {"scale", "boxes", "residual"}, out);
        ctx.diag("dimension", fit.dimension);
        ctx.diag("r_squared", fit.r_squared);
        ctx.finish();
        return;
    }
    const auto a = load_snapshots(get_string(kv, "a", ""));
    const auto b = load_snapshots(get_string(kv, "b", ""));
    const CompareReport rep = compare_trajectories(a, b);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < rep.times.size(); ++k)
        rows.push_back({rep.times[k], rep.hausdorff[k], rep.moment_gap[k]});
    ctx.csv("compare.csv", {"t", "hausdorff", "moment_gap"}, rows);
    ctx.diag("max_hausdorff", rep.max_hausdorff);
    ctx.finish();
}

// ------------------------------------------------------------------- main

struct Command {
    std::string name;
    std::string blurb;
    std::vector<std::string> keys;
    void (*run)(const KeyValues&);
};

const std::vector<Command> kCommands = {
    {"pg", "exact moment-conserving polynomial evolution",
     {"a1", "a2", "a3", "direction", "t_end", "dt"}, run_pg},
    {"dbm", "spectral breakdown-model flow",
     {"alpha", "sigma", "M", "dt", "t_end", "snapshot_every", "coeffs", "orientation"}, run_dbm},
    {"blockdla", "stochastic block deposition",
     {"N", "K", "epsilon", "steps", "M", "length_weighted", "coeffs"}, run_blockdla},
    {"fekete", "Fekete points and transfinite diameter",
     {"shape", "points", "n", "n_max"}, run_fekete},
    {"equilibrium", "weighted equilibrium measure on the line",
     {"t", "n", "V", "constrained", "lo", "hi", "max_iters"}, run_equilibrium},
    {"weak", "weak-solution frontier of a discrete measure",
     {"vq", "mu", "mu_csv", "x0", "x1", "y0", "y1", "nx", "ny", "tol", "svg"}, run_weak},
    {"nrm", "normal-matrix eigenvalue sampling",
     {"t0", "tk", "n", "N", "sweeps", "thin", "x0", "x1", "y0", "y1", "nx", "ny"}, run_nrm},
    {"compare", "trajectory distances and cloud dimension",
     {"a", "b", "dimension"}, run_compare},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"laplab: regularized Laplacian growth laboratory"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    struct Pending {
        const Command* command;
        std::string config_path;
        std::map<std::string, std::string> flags;
        CLI::App* sub;
    };
    std::vector<Pending> pending;
    pending.reserve(kCommands.size());
    for (const auto& cmd : kCommands) {
        auto* sub = app.add_subcommand(cmd.name, cmd.blurb);
        pending.push_back({&cmd, "", {}, sub});
        auto& slot = pending.back();
        sub->add_option("--config", slot.config_path, "flat key=value config file");
        auto add = [&](const std::string& key, const std::string& desc) {
            slot.flags[key];
            sub->add_option("--" + key, slot.flags[key], desc);
        };
        for (const auto& key : cmd.keys) add(key, "overrides config key " + key);
        add("seed", "RNG seed, recorded in outputs");
        add("out", "output directory (default $LAPLAB_OUT/<command>)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    for (auto& slot : pending) {
        if (!slot.sub->parsed()) continue;
        try {
            KeyValues kv;
            if (!slot.config_path.empty()) kv = load_config(slot.config_path);
            for (const auto& [key, value] : slot.flags)
                if (slot.sub->count("--" + key) > 0) kv[key] = value;  // flag wins
            slot.command->run(kv);
        } catch (const NonConvergenceError& e) {
            std::fprintf(stderr, "laplab: %s\n", e.what());
            return 4;
        } catch (const std::invalid_argument& e) {
            std::fprintf(stderr, "laplab: %s\n", e.what());
            return 2;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "laplab: %s\n", e.what());
            return 3;
        }
    }
    return 0;
}
