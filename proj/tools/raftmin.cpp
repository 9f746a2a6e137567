// raftmin: spectral evaluation and minimization toolkit for the nonlocal
// membrane-raft energy family. Subcommands map 1:1 to library capabilities;
// every run writes a manifest that `raftmin rerun` can replay.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "raftmin/energy.hpp"
#include "raftmin/gamma.hpp"
#include "raftmin/grid.hpp"
#include "raftmin/io.hpp"
#include "raftmin/minimize.hpp"
#include "raftmin/operators.hpp"
#include "raftmin/physical.hpp"
#include "raftmin/potential.hpp"

namespace fs = std::filesystem;
using namespace raftmin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

std::vector<double> split_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list: " + csv);
    return out;
}

std::vector<int> split_ints(const std::string& csv) {
    std::vector<int> out;
    for (double v : split_doubles(csv)) out.push_back(static_cast<int>(std::lround(v)));
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// option bundles shared between subcommands (also the manifest schema)

struct GridOptions {
    int dim = 1;
    std::string extent = "2";
    std::string n = "256";
    std::string boundary = "neumann";

    void attach(CLI::App* cmd) {
        cmd->add_option("--dim", dim, "grid dimension (1-3)")->check(CLI::Range(1, 3));
        cmd->add_option("--extent", extent, "box side per axis, comma list (centered)");
        cmd->add_option("--n", n, "points per axis, comma list");
        cmd->add_option("--boundary", boundary, "neumann | periodic")
            ->check(CLI::IsMember({"neumann", "periodic"}));
    }
    GridPtr build() const {
        std::vector<double> ext = split_doubles(extent);
        std::vector<int> pts = split_ints(n);
        if (ext.size() == 1 && dim > 1) ext.assign(static_cast<std::size_t>(dim), ext[0]);
        if (pts.size() == 1 && dim > 1) pts.assign(static_cast<std::size_t>(dim), pts[0]);
        if (static_cast<int>(ext.size()) != dim || static_cast<int>(pts.size()) != dim) {
            throw std::invalid_argument("extent/n lists must match --dim");
        }
        return Grid::make(ext, pts, boundary_from_string(boundary));
    }
    void echo(KeyValueMap& m) const {
        m["grid.dim"] = std::to_string(dim);
        m["grid.extent"] = extent;
        m["grid.n"] = n;
        m["grid.boundary"] = boundary;
    }
};

struct PotentialOptions {
    std::string kind = "quartic_truncated";
    double s0 = 2.0;
    double a2 = -1e-5;
    double a4 = 1e-5;
    double kappa = 1e-19;
    double lambda = 4.9e-12;
    bool raw_physical = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--potential", kind, "quartic_truncated | physical_quartic")
            ->check(CLI::IsMember({"quartic_truncated", "physical_quartic"}));
        cmd->add_option("--s0", s0, "quadratic-extension crossover");
        cmd->add_option("--a2", a2, "physical quadratic coefficient [J/m^2]");
        cmd->add_option("--a4", a4, "physical quartic coefficient [J/m^2]");
        cmd->add_option("--kappa", kappa, "bending rigidity [J]");
        cmd->add_option("--lambda", lambda, "composition-curvature coupling [J/m]");
        cmd->add_flag("--raw-physical", raw_physical,
                      "keep W = (2 kappa/Lambda^2) f unshifted (wells below zero)");
    }
    Potential build() const {
        if (kind == "quartic_truncated") return Potential::quartic_truncated(s0);
        return Potential::physical_quartic(a2, a4, kappa, lambda, !raw_physical);
    }
    void echo(KeyValueMap& m) const {
        m["potential.potential"] = kind;
        if (kind == "quartic_truncated") {
            m["potential.s0"] = format_double(s0);
        } else {
            m["potential.a2"] = format_double(a2);
            m["potential.a4"] = format_double(a4);
            m["potential.kappa"] = format_double(kappa);
            m["potential.lambda"] = format_double(lambda);
            if (raw_physical) m["potential.raw-physical"] = "true";
        }
    }
};

struct FieldOptions {
    std::string source = "const";
    double const_value = 1.0;
    int mode_n = 1;
    double amplitude = 0.1;
    double mean = 0.0;
    std::uint64_t seed = 1;
    std::string path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--source", source, "const | mode | step | random | file")
            ->check(CLI::IsMember({"const", "mode", "step", "random", "file"}));
        cmd->add_option("--const", const_value, "constant value (source=const)");
        cmd->add_option("--mode", mode_n, "mode index n of cos(2 pi n x) (source=mode)");
        cmd->add_option("--amplitude", amplitude, "noise amplitude (source=random)");
        cmd->add_option("--mean", mean, "mean offset (source=random)");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--field", path, "input RAFTFIELD path (source=file)");
    }
    ScalarField build(GridPtr grid, const GridOptions& gopts) const {
        if (source == "const") return ScalarField::constant(grid, const_value);
        if (source == "mode") {
            if (grid->dims() == 1) return paper_mode(grid, mode_n);
            std::vector<int> harmonics(static_cast<std::size_t>(grid->dims()), 0);
            harmonics[0] = mode_n;
            return cosine_mode(grid, harmonics);
        }
        if (source == "step") {
            const double center = grid->axis(0).origin + grid->axis(0).length / 2.0;
            return ScalarField::from_function(grid, [center](std::span<const double> x) {
                return x[0] < center ? 1.0 : -1.0;
            });
        }
        if (source == "random") return random_initial_field(grid, amplitude, mean, seed);
        if (path.empty()) throw std::invalid_argument("--field path required for source=file");
        return read_raftfield(path, split_doubles(gopts.extent));
    }
    void echo(KeyValueMap& m) const {
        m["field.source"] = source;
        if (source == "const") m["field.const"] = format_double(const_value);
        if (source == "mode") m["field.mode"] = std::to_string(mode_n);
        if (source == "random") {
            m["field.amplitude"] = format_double(amplitude);
            m["field.mean"] = format_double(mean);
            m["field.seed"] = std::to_string(seed);
        }
        if (source == "file") m["field.field"] = path;
    }
};

struct OutputOptions {
    std::string dir = ".";
    void attach(CLI::App* cmd) { cmd->add_option("--out", dir, "output directory"); }
    fs::path prepare() const {
        fs::path p(dir);
        fs::create_directories(p);
        return p;
    }
};

void write_manifest(const fs::path& out_dir, const std::string& subcommand, KeyValueMap m) {
    m["run.subcommand"] = subcommand;
    write_key_value_file(out_dir / "manifest.txt", m);
}

// ---------------------------------------------------------------------------

struct EnergyCmd {
    GridOptions grid;
    PotentialOptions pot;
    FieldOptions field;
    OutputOptions out;
    double eps = 0.1;
    double q = 0.0;
    std::string functional = "star";

    void attach(CLI::App* cmd) {
        grid.attach(cmd);
        pot.attach(cmd);
        field.attach(cmd);
        out.attach(cmd);
        cmd->add_option("--eps", eps, "interface scale epsilon")->check(CLI::PositiveNumber);
        cmd->add_option("--q", q, "effective tension parameter");
        cmd->add_option("--functional", functional, "star (in u) | v (in v)")
            ->check(CLI::IsMember({"star", "v"}));
    }

    int run() const {
        const fs::path dir = out.prepare();
        GridPtr g = grid.build();
        const Potential w = pot.build();
        const ScalarField u = field.build(g, grid);
        const EnergyParams params{eps, q};

        const EnergyBreakdown b =
            functional == "star" ? f_star(u, params, w) : f_v(u, params, w);

        std::string kv = breakdown_kv(b);
        std::string csv = breakdown_csv_header();
        std::string row = breakdown_csv_row(b);
        if (field.source == "mode" && g->dims() == 1) {
            const ModeEnergy me = mode_energy(q, eps, field.mode_n);
            kv += "mode_f_qn = " + format_double(me.f_qn) + "\n";
            kv += "mode_destabilizing = " + std::string(me.destabilizing ? "true" : "false") + "\n";
            csv.insert(csv.size() - 1, ",mode_f_qn");
            row.insert(row.size() - 1, "," + format_double(me.f_qn));
        }
        {
            std::ofstream f(dir / "breakdown.txt");
            f << kv;
            std::ofstream c(dir / "breakdown.csv");
            c << csv << row;
        }

        KeyValueMap m;
        grid.echo(m);
        pot.echo(m);
        field.echo(m);
        m["params.eps"] = format_double(eps);
        m["params.q"] = format_double(q);
        m["params.functional"] = functional;
        write_manifest(dir, "energy", m);
        return kExitOk;
    }
};

struct HelmholtzCmd {
    GridOptions grid;
    FieldOptions field;
    OutputOptions out;
    double eps = 0.1;

    void attach(CLI::App* cmd) {
        grid.attach(cmd);
        field.attach(cmd);
        out.attach(cmd);
        cmd->add_option("--eps", eps, "resolvent scale epsilon")->check(CLI::PositiveNumber);
    }

    int run() const {
        const fs::path dir = out.prepare();
        GridPtr g = grid.build();
        const ScalarField u = field.build(g, grid);
        const ScalarField v = helmholtz_inverse(u, eps);

        // residual of -eps^2 Lap v + v = u
        ScalarField lap = laplacian(v);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double r = -eps * eps * lap[i] + v[i] - u[i];
            num += r * r;
            den += u[i] * u[i];
        }
        const double residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);

        write_raftfield(dir / "resolvent.raftfield", v);
        if (g->dims() <= 2) write_field_csv(dir / "resolvent.csv", v);
        {
            std::ofstream f(dir / "report.txt");
            f << "residual = " << format_double(residual) << '\n';
            f << "mean_in = " << format_double(integrate(u) / g->volume()) << '\n';
            f << "mean_out = " << format_double(integrate(v) / g->volume()) << '\n';
        }

        KeyValueMap m;
        grid.echo(m);
        field.echo(m);
        m["params.eps"] = format_double(eps);
        write_manifest(dir, "helmholtz", m);
        return kExitOk;
    }
};

struct ModesCmd {
    OutputOptions out;
    double eps = 0.05;
    double q = 0.75;
    int nmax = 16;

    void attach(CLI::App* cmd) {
        out.attach(cmd);
        cmd->add_option("--eps", eps, "epsilon")->check(CLI::PositiveNumber);
        cmd->add_option("--q", q, "q");
        cmd->add_option("--nmax", nmax, "largest mode index")->check(CLI::PositiveNumber);
    }

    int run() const {
        const fs::path dir = out.prepare();
        std::vector<std::vector<double>> rows;
        int best_n = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int n = 0; n <= nmax; ++n) {
            const ModeEnergy me = mode_energy(q, eps, n);
            rows.push_back({static_cast<double>(n), me.lambda,
                            eps * eps * me.lambda * me.lambda, me.f_qn,
                            me.destabilizing ? 1.0 : 0.0});
            if (me.f_qn < best) {
                best = me.f_qn;
                best_n = n;
            }
        }
        write_csv(dir / "modes.csv", {"n", "lambda", "eps2_lambda2", "f_qn", "destabilizing"},
                  rows);

        const OptimalMode opt = optimal_mode(q, eps);
        {
            std::ofstream f(dir / "summary.txt");
            f << "minimizing_listed_mode = " << best_n << '\n';
            f << "minimizing_listed_f_qn = " << format_double(best) << '\n';
            f << "optimal_eps2_lambda2 = " << format_double(opt.eps_sq_lambda_star_sq) << '\n';
            f << "optimal_f_star = " << format_double(opt.f_star) << '\n';
            f << "unbounded = " << (opt.unbounded ? "true" : "false") << '\n';
        }

        KeyValueMap m;
        m["params.eps"] = format_double(eps);
        m["params.q"] = format_double(q);
        m["params.nmax"] = std::to_string(nmax);
        write_manifest(dir, "modes", m);
        return kExitOk;
    }
};

struct FlowCmd {
    GridOptions grid;
    PotentialOptions pot;
    FieldOptions field;
    OutputOptions out;
    double eps = 0.05;
    double q = 0.75;
    std::string scheme = "semi_implicit_spectral";
    double dt = 0.01;
    int max_steps = 20000;
    double tol = 1e-7;
    bool fix_mean = false;
    int log_every = 10;

    FlowCmd() { field.source = "random"; }

    void attach(CLI::App* cmd) {
        grid.attach(cmd);
        pot.attach(cmd);
        field.attach(cmd);
        out.attach(cmd);
        cmd->add_option("--eps", eps, "epsilon")->check(CLI::PositiveNumber);
        cmd->add_option("--q", q, "q");
        cmd->add_option("--scheme", scheme, "l2_descent | semi_implicit_spectral")
            ->check(CLI::IsMember({"l2_descent", "semi_implicit_spectral"}));
        cmd->add_option("--dt", dt, "initial step size")->check(CLI::PositiveNumber);
        cmd->add_option("--max-steps", max_steps, "step budget")->check(CLI::PositiveNumber);
        cmd->add_option("--tol", tol, "gradient L2 tolerance")->check(CLI::PositiveNumber);
        cmd->add_flag("--fix-mean", fix_mean, "conserve the field mean");
        cmd->add_option("--log-every", log_every, "trajectory sampling stride");
    }

    int run() const {
        const fs::path dir = out.prepare();
        GridPtr g = grid.build();
        const Potential w = pot.build();
        const ScalarField u0 = field.build(g, grid);

        FlowConfig cfg;
        cfg.scheme = scheme == "l2_descent" ? FlowScheme::l2_descent
                                            : FlowScheme::semi_implicit_spectral;
        cfg.dt = dt;
        cfg.max_steps = max_steps;
        cfg.grad_tolerance = tol;
        cfg.log_every = log_every;
        cfg.seed = field.seed;
        if (fix_mean) cfg.fixed_mean = integrate(u0) / g->volume();

        const FlowResult res = descend(u0, EnergyParams{eps, q}, w, cfg);

        std::vector<std::vector<double>> rows;
        for (const TrajectoryPoint& t : res.trajectory) {
            rows.push_back({static_cast<double>(t.step), t.energy, t.grad_norm, t.mean,
                            t.dominant_lambda});
        }
        write_csv(dir / "trajectory.csv",
                  {"step", "energy", "grad_norm", "mean", "dominant_wavenumber"}, rows);
        write_raftfield(dir / "final.raftfield", res.field);
        if (g->dims() <= 2) write_field_csv(dir / "final.csv", res.field);
        {
            std::ofstream f(dir / "summary.txt");
            f << "status = " << to_string(res.status) << '\n';
            f << "steps = " << res.steps << '\n';
            f << "energy = " << format_double(res.energy) << '\n';
            f << "grad_norm = " << format_double(res.grad_norm) << '\n';
            f << "dominant_wavenumber = " << format_double(dominant_wavenumber(res.field))
              << '\n';
            f << "eps = " << format_double(eps) << '\n';
            f << "q = " << format_double(q) << '\n';
        }

        KeyValueMap m;
        grid.echo(m);
        pot.echo(m);
        field.echo(m);
        m["params.eps"] = format_double(eps);
        m["params.q"] = format_double(q);
        m["flow.scheme"] = scheme;
        m["flow.dt"] = format_double(dt);
        m["flow.max-steps"] = std::to_string(max_steps);
        m["flow.tol"] = format_double(tol);
        if (fix_mean) m["flow.fix-mean"] = "true";
        m["flow.log-every"] = std::to_string(log_every);
        write_manifest(dir, "flow", m);

        if (res.status == FlowStatus::diverged || res.status == FlowStatus::step_underflow) {
            std::cerr << "flow did not converge: " << to_string(res.status) << " (eps="
                      << eps << ", q=" << q << ")\n";
            return kExitNumerical;
        }
        return kExitOk;
    }
};

struct CellCmd {
    PotentialOptions pot;
    OutputOptions out;
    double q = 0.05;
    int profile_dofs = 512;
    std::string eps_grid = "";
    int eps_points = 16;
    double clamp = 0.05;
    int max_iters = 4000;
    double grad_tol = 1e-6;

    void attach(CLI::App* cmd) {
        pot.attach(cmd);
        out.attach(cmd);
        cmd->add_option("--q", q, "q");
        cmd->add_option("--profile-dofs", profile_dofs, "1D profile resolution");
        cmd->add_option("--eps-grid", eps_grid, "explicit eps list (comma)");
        cmd->add_option("--eps-points", eps_points, "log-grid size when no explicit list");
        cmd->add_option("--clamp", clamp, "clamp zone width");
        cmd->add_option("--max-iters", max_iters, "descent iteration budget");
        cmd->add_option("--grad-tol", grad_tol, "descent gradient tolerance");
    }

    CellOptions options() const {
        CellOptions opts;
        opts.profile_dofs = profile_dofs;
        opts.eps_grid = eps_grid.empty() ? default_eps_grid(eps_points) : split_doubles(eps_grid);
        opts.clamp_width = clamp;
        opts.max_iters = max_iters;
        opts.grad_tol = grad_tol;
        return opts;
    }

    int run() const {
        const fs::path dir = out.prepare();
        const Potential w = pot.build();
        const CellEstimate est = estimate_md(w, q, options());

        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < est.eps_grid.size(); ++i) {
            rows.push_back({est.eps_grid[i], est.values[i]});
        }
        write_csv(dir / "cell.csv", {"eps", "cell_energy"}, rows);
        write_raftfield(dir / "profile.raftfield", est.argmin_profile().field());
        write_field_csv(dir / "profile.csv", est.argmin_profile().field());
        {
            std::ofstream f(dir / "summary.txt");
            f << "md_hat = " << format_double(est.md_hat) << '\n';
            f << "argmin_eps = " << format_double(est.argmin_epsilon) << '\n';
            f << "q = " << format_double(q) << '\n';
            f << "floor_q_times_4_3 = " << format_double(q * 4.0 / 3.0) << '\n';
        }

        KeyValueMap m;
        pot.echo(m);
        m["cell.q"] = format_double(q);
        m["cell.profile-dofs"] = std::to_string(profile_dofs);
        m["cell.eps-grid"] = join_doubles(options().eps_grid);
        m["cell.clamp"] = format_double(clamp);
        m["cell.max-iters"] = std::to_string(max_iters);
        m["cell.grad-tol"] = format_double(grad_tol);
        write_manifest(dir, "cell", m);
        return kExitOk;
    }
};

struct GammaCmd {
    PotentialOptions pot;
    OutputOptions out;
    double q = 0.05;
    std::string eps_list = "0.1,0.05,0.02";
    std::string geometry = "slab";
    int slab_axis = 0;
    double slab_offset = 0.0;
    int n2d = 256;
    std::string extent = "2,2";
    double beta = 0.8;
    int profile_dofs = 512;
    int eps_points = 16;
    int max_iters = 4000;

    void attach(CLI::App* cmd) {
        pot.attach(cmd);
        out.attach(cmd);
        cmd->add_option("--q", q, "q");
        cmd->add_option("--eps-list", eps_list, "recovery eps values (comma)");
        cmd->add_option("--geometry", geometry, "slab")->check(CLI::IsMember({"slab"}));
        cmd->add_option("--slab-axis", slab_axis, "slab normal axis");
        cmd->add_option("--slab-offset", slab_offset, "slab position");
        cmd->add_option("--n2d", n2d, "domain resolution per axis");
        cmd->add_option("--extent", extent, "domain extents (comma)");
        cmd->add_option("--beta", beta, "diagonal scale factor eps0 ~ beta sqrt(eps)");
        cmd->add_option("--profile-dofs", profile_dofs, "cell profile resolution");
        cmd->add_option("--eps-points", eps_points, "cell eps grid size");
        cmd->add_option("--max-iters", max_iters, "cell descent budget");
    }

    int run() const {
        const fs::path dir = out.prepare();
        const Potential w = pot.build();
        const std::vector<double> ext = split_doubles(extent);
        GridPtr g = Grid::make(ext, std::vector<int>(ext.size(), n2d), BoundaryKind::neumann);

        CellOptions copts;
        copts.profile_dofs = profile_dofs;
        copts.eps_grid = default_eps_grid(eps_points);
        copts.max_iters = max_iters;

        const InterfaceGeometry geom = InterfaceGeometry::slab(slab_axis, slab_offset);
        const GammaCompareResult res =
            gamma_compare(geom, w, q, split_doubles(eps_list), g, copts, beta);

        std::vector<std::vector<double>> rows;
        for (const GammaRow& r : res.rows) {
            rows.push_back({r.epsilon, r.eps0, r.energy, r.md_times_per, r.ratio});
        }
        write_csv(dir / "gamma.csv", {"eps", "eps0", "energy", "md_times_per", "ratio"}, rows);
        {
            std::ofstream f(dir / "summary.txt");
            f << "md_hat = " << format_double(res.md_hat) << '\n';
            f << "perimeter = " << format_double(res.perimeter_value) << '\n';
            f << "trend_ok = " << (res.trend_ok ? "true" : "false") << '\n';
            f << "final_gap = " << format_double(res.final_gap) << '\n';
        }

        KeyValueMap m;
        pot.echo(m);
        m["gamma.q"] = format_double(q);
        m["gamma.eps-list"] = eps_list;
        m["gamma.geometry"] = geometry;
        m["gamma.slab-axis"] = std::to_string(slab_axis);
        m["gamma.slab-offset"] = format_double(slab_offset);
        m["gamma.n2d"] = std::to_string(n2d);
        m["gamma.extent"] = extent;
        m["gamma.beta"] = format_double(beta);
        m["gamma.profile-dofs"] = std::to_string(profile_dofs);
        m["gamma.eps-points"] = std::to_string(eps_points);
        m["gamma.max-iters"] = std::to_string(max_iters);
        write_manifest(dir, "gamma", m);
        return res.trend_ok ? kExitOk : kExitNumerical;
    }
};

struct NondimCmd {
    OutputOptions out;
    bool table1 = false;
    double a2 = -1e-5;
    double a4 = 1e-5;
    double b = 5e-19;
    double sigma = 1e-5;
    double kappa = 1e-19;
    double lambda = 4.9e-12;
    double length = 1e-5;
    std::string sigma_sweep;  // lo,hi,count

    void attach(CLI::App* cmd) {
        out.attach(cmd);
        cmd->add_flag("--table1", table1, "start from the characteristic parameter set");
        cmd->add_option("--a2", a2, "a2 [J/m^2]");
        cmd->add_option("--a4", a4, "a4 [J/m^2]");
        cmd->add_option("--b", b, "line tension [J]");
        cmd->add_option("--sigma", sigma, "surface tension [J/m^2]");
        cmd->add_option("--kappa", kappa, "bending rigidity [J]");
        cmd->add_option("--lambda", lambda, "coupling [J/m]");
        cmd->add_option("--L", length, "sample size [m]");
        cmd->add_option("--sigma-sweep", sigma_sweep, "lo,hi,count geometric sweep");
    }

    int run() const {
        const fs::path dir = out.prepare();
        PhysicalParams p{a2, a4, b, sigma, kappa, lambda, length};
        const Nondimensional nd = nondimensionalize(p);
        {
            std::ofstream f(dir / "summary.txt");
            f << "eps = " << format_double(nd.epsilon) << '\n';
            f << "q = " << format_double(nd.q) << '\n';
            f << "w_scale = " << format_double(nd.w_scale) << '\n';
            f << "intrinsic_length = " << format_double(nd.intrinsic_length) << '\n';
        }
        if (!sigma_sweep.empty()) {
            const std::vector<double> spec = split_doubles(sigma_sweep);
            if (spec.size() != 3) throw std::invalid_argument("--sigma-sweep wants lo,hi,count");
            const int count = static_cast<int>(spec[2]);
            std::vector<std::vector<double>> rows;
            for (int i = 0; i < count; ++i) {
                const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
                PhysicalParams ps = p;
                ps.sigma = spec[0] * std::pow(spec[1] / spec[0], f);
                const Nondimensional nds = nondimensionalize(ps);
                rows.push_back({ps.sigma, nds.epsilon, nds.q});
            }
            write_csv(dir / "sweep.csv", {"sigma", "eps", "q"}, rows);
        }

        KeyValueMap m;
        if (table1) m["nondim.table1"] = "true";
        m["nondim.a2"] = format_double(a2);
        m["nondim.a4"] = format_double(a4);
        m["nondim.b"] = format_double(b);
        m["nondim.sigma"] = format_double(sigma);
        m["nondim.kappa"] = format_double(kappa);
        m["nondim.lambda"] = format_double(lambda);
        m["nondim.L"] = format_double(length);
        if (!sigma_sweep.empty()) m["nondim.sigma-sweep"] = sigma_sweep;
        write_manifest(dir, "nondim", m);
        return kExitOk;
    }
};

int run_argv(const std::vector<std::string>& args);

int run_rerun(const std::string& manifest_path, const std::string& out_dir) {
    const KeyValueMap m = parse_key_value_file(manifest_path);
    const auto it = m.find("run.subcommand");
    if (it == m.end()) throw std::invalid_argument("manifest lacks run.subcommand");

    std::vector<std::string> args{it->second};
    for (const auto& [key, value] : m) {
        if (key == "run.subcommand") continue;
        const auto dot = key.find('.');
        const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
        if (value == "true") {
            args.push_back("--" + name);
        } else {
            args.push_back("--" + name);
            args.push_back(value);
        }
    }
    args.push_back("--out");
    args.push_back(out_dir);
    return run_argv(args);
}

int run_argv(const std::vector<std::string>& args) {
    CLI::App app{"spectral energy evaluation and minimization for membrane-raft functionals"};
    app.require_subcommand(1);

    EnergyCmd energy_cmd;
    HelmholtzCmd helm_cmd;
    ModesCmd modes_cmd;
    FlowCmd flow_cmd;
    CellCmd cell_cmd;
    GammaCmd gamma_cmd;
    NondimCmd nondim_cmd;
    std::string rerun_manifest;
    std::string rerun_out = ".";

    energy_cmd.attach(app.add_subcommand("energy", "evaluate an energy breakdown"));
    helm_cmd.attach(app.add_subcommand("helmholtz", "apply (1 - eps^2 Lap)^{-1}"));
    modes_cmd.attach(app.add_subcommand("modes", "single-mode energy table"));
    flow_cmd.attach(app.add_subcommand("flow", "gradient-flow minimization"));
    cell_cmd.attach(app.add_subcommand("cell", "cell-problem estimate of m_d"));
    gamma_cmd.attach(app.add_subcommand("gamma", "recovery-sequence comparison"));
    nondim_cmd.attach(app.add_subcommand("nondim", "physical to (eps, q) mapping"));
    CLI::App* rerun = app.add_subcommand("rerun", "replay an emitted manifest");
    rerun->add_option("manifest", rerun_manifest, "manifest path")->required();
    rerun->add_option("--out", rerun_out, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);
            return kExitOk;
        }
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }

    if (app.got_subcommand("energy")) return energy_cmd.run();
    if (app.got_subcommand("helmholtz")) return helm_cmd.run();
    if (app.got_subcommand("modes")) return modes_cmd.run();
    if (app.got_subcommand("flow")) return flow_cmd.run();
    if (app.got_subcommand("cell")) return cell_cmd.run();
    if (app.got_subcommand("gamma")) return gamma_cmd.run();
    if (app.got_subcommand("nondim")) return nondim_cmd.run();
    if (app.got_subcommand("rerun")) return run_rerun(rerun_manifest, rerun_out);
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run_argv(args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
