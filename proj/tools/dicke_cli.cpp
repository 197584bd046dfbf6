// dicke_cli.cpp — command-line driver for the Dicke phase-space toolkit.
//
// Subcommands: ground (state JSON + observables), husimi (grid CSV),
// wehrl (coupling sweep CSV), zeros (zero-surface curves CSV + fringe JSON).
// Exit codes: 0 success, 2 validation, 3 domain error, 4 non-convergence.
// Identical invocations produce byte-identical outputs regardless of the
// thread count: sweep rows are computed in fixed per-point order and written
// in lambda order with incremental flushing.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dicke/dicke.hpp"

namespace {

using namespace dicke;

constexpr int kExitValidation = 2;
constexpr int kExitDomain = 3;
constexpr int kExitConvergence = 4;

struct CommonOptions {
    double omega = 1.0;
    double omega0 = 1.0;
    double lambda = 0.0;
    double j = 0.5;

    ModelParams params() const {
        ModelParams p{omega, omega0, lambda, j};
        p.validate();
        return p;
    }
};

void add_model_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--omega", opt.omega, "field frequency")->capture_default_str();
    cmd->add_option("--omega0", opt.omega0, "atomic level splitting")->capture_default_str();
    cmd->add_option("--lambda", opt.lambda, "coupling strength")->capture_default_str();
    cmd->add_option("--j", opt.j, "pseudospin length (half-integer, N = 2j)")
        ->capture_default_str();
}

CutoffPolicy cutoff_policy_from_env() {
    CutoffPolicy policy;
    if (const char* ceiling = std::getenv("DICKE_MAX_NC")) {
        const int v = std::atoi(ceiling);
        if (v >= 1) policy.n_c_max = v;
    }
    return policy;
}

std::unique_ptr<std::ostream> open_sink(const std::string& path, std::ostream*& out) {
    if (path == "-") {
        out = &std::cout;
        return nullptr;
    }
    auto file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::runtime_error("cannot open output file: " + path);
    out = file.get();
    return file;
}

void require_format(const std::string& format, const std::string& expected,
                    const std::string& cmd) {
    if (format != expected)
        throw std::invalid_argument(cmd + ": only --format " + expected + " is supported");
}

// ---------------------------------- ground ----------------------------------

struct GroundOptions {
    CommonOptions model;
    double e_tol = 1e-8;
    double w_tol = 1e-8;
    int n_c0 = 16;
    std::string out;
    std::string format = "json";
};

int run_ground(const GroundOptions& opt) {
    CutoffPolicy policy = cutoff_policy_from_env();
    policy.e_tol = opt.e_tol;
    policy.w_tol = opt.w_tol;
    policy.n_c0 = opt.n_c0;
    require_format(opt.format, "json", "ground");

    const GroundState g = converge_cutoff(opt.model.params(), policy);
    const GroundObservables obs = observables(g);
    std::cout << "energy " << format_full(g.energy) << '\n'
              << "n_c " << g.n_c << '\n'
              << "mean_photons " << format_full(obs.mean_photons) << '\n'
              << "mean_jz " << format_full(obs.mean_jz) << '\n'
              << "parity " << format_full(obs.parity_expectation) << '\n';
    if (!opt.out.empty()) save_ground_state(g, opt.out);
    return 0;
}

// ---------------------------------- husimi ----------------------------------

struct HusimiOptions {
    CommonOptions model;
    std::string method = "exact";
    std::string slice = "position";
    double alpha_extent = 0.0;  // 0 = auto from the equilibrium
    double z_extent = 2.0;
    int nx = 101;
    int nz = 101;
    std::string out = "-";
    std::string format = "csv";
};

int run_husimi(const HusimiOptions& opt) {
    require_format(opt.format, "csv", "husimi");
    if (opt.method != "exact" && opt.method != "variational")
        throw std::invalid_argument("husimi: --method must be exact or variational");
    if (opt.slice != "position" && opt.slice != "momentum")
        throw std::invalid_argument("husimi: --slice must be position or momentum");

    const ModelParams p = opt.model.params();
    const Slice slice = opt.slice == "position" ? Slice::position : Slice::momentum;
    const Equilibrium eq = equilibrium_minimize(p);
    const double extent =
        opt.alpha_extent > 0.0 ? opt.alpha_extent : std::max(4.0, std::abs(eq.alpha_e) + 3.0);
    const auto ax = linspace(-extent, extent, opt.nx);
    const auto az = linspace(-opt.z_extent, opt.z_extent, opt.nz);

    HusimiField f;
    if (opt.method == "exact") {
        const GroundState g = converge_cutoff(p, cutoff_policy_from_env());
        f = husimi_grid(g, slice, ax, az);
    } else {
        const CatState cat = make_cat_state(eq);
        f.slice = slice;
        f.axis1 = ax;
        f.axis2 = az;
        f.values.resize(opt.nx, opt.nz);
        for (int i = 0; i < opt.nx; ++i)
            for (int k = 0; k < opt.nz; ++k)
                f.values(i, k) = husimi_variational(
                    cat, slice_point(slice, ax[static_cast<std::size_t>(i)],
                                     az[static_cast<std::size_t>(k)]));
    }

    std::ostream* sink = nullptr;
    auto holder = open_sink(opt.out, sink);
    write_csv(f, *sink);
    return 0;
}

// ----------------------------------- wehrl ----------------------------------

struct WehrlOptions {
    CommonOptions model;
    double lambda_from = 0.0;
    double lambda_to = 1.0;
    int steps = 41;
    int threads = 0;  // 0 = hardware
    double rel_tol = 1e-3;
    std::string out = "-";
    std::string format = "csv";
    std::string variational_csv;
};

struct WehrlRow {
    double lambda = 0.0;
    double w_exact = 0.0;
    double w_variational = 0.0;
    VariationalSweepRow detail;
};

int run_wehrl(const WehrlOptions& opt) {
    require_format(opt.format, "csv", "wehrl");
    if (opt.steps < 1) throw std::invalid_argument("wehrl: --steps must be >= 1");
    if (!(opt.lambda_to >= opt.lambda_from))
        throw std::invalid_argument("wehrl: --lambda-to must be >= --lambda-from");
    ModelParams base = opt.model.params();
    base.lambda = opt.lambda_from;
    base.validate();

    const int steps = opt.steps;
    std::vector<WehrlRow> rows(static_cast<std::size_t>(steps));
    std::vector<char> done(static_cast<std::size_t>(steps), 0);
    std::mutex mtx;
    std::condition_variable cv;
    std::atomic<int> next{0};
    std::exception_ptr failure;

    auto compute = [&](int i) {
        ModelParams p = base;
        p.lambda = steps == 1 ? opt.lambda_from
                              : opt.lambda_from +
                                    (opt.lambda_to - opt.lambda_from) * i / (steps - 1);
        WehrlRow row;
        row.lambda = p.lambda;

        const GroundState g = converge_cutoff(p, cutoff_policy_from_env());
        QuadratureSpec spec =
            default_quadrature_spec(std::sqrt(std::max(0.0, observables(g).mean_photons)));
        spec.rel_tol = opt.rel_tol;
        row.w_exact = wehrl_entropy(g, spec, 1);

        const Equilibrium eq = equilibrium_minimize(p);
        const CatState cat = make_cat_state(eq);
        QuadratureSpec vspec = default_quadrature_spec(eq.alpha_e);
        vspec.rel_tol = opt.rel_tol;
        row.w_variational = wehrl_variational_quadrature(cat, vspec, 1);

        const VariationalWehrl analytic = wehrl_variational_analytic(p);
        row.detail = {p.lambda,           eq.alpha_e,        eq.z_e,
                      analytic.value,     row.w_variational, eq.source};
        return row;
    };

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= steps) return;
            try {
                WehrlRow row = compute(i);
                std::lock_guard<std::mutex> lock(mtx);
                rows[static_cast<std::size_t>(i)] = std::move(row);
                done[static_cast<std::size_t>(i)] = 1;
            } catch (...) {
                std::lock_guard<std::mutex> lock(mtx);
                if (!failure) failure = std::current_exception();
                done[static_cast<std::size_t>(i)] = 1;
            }
            cv.notify_all();
        }
    };

    const int n_workers = std::min(resolve_threads(opt.threads), steps);
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);

    std::ostream* sink = nullptr;
    auto holder = open_sink(opt.out, sink);
    CsvWriter csv(*sink);
    csv.header({"lambda", "W_exact", "W_variational"});
    // rows land in completion order; emit them in lambda order as they arrive
    for (int i = 0; i < steps; ++i) {
        std::unique_lock<std::mutex> lock(mtx);
        cv.wait(lock, [&] { return done[static_cast<std::size_t>(i)] == 1; });
        if (failure) break;
        const WehrlRow& r = rows[static_cast<std::size_t>(i)];
        lock.unlock();
        csv.row({format_full(r.lambda), format_full(r.w_exact), format_full(r.w_variational)});
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    if (!opt.variational_csv.empty()) {
        std::vector<VariationalSweepRow> details;
        details.reserve(rows.size());
        for (const auto& r : rows) details.push_back(r.detail);
        auto out = open_output_file(opt.variational_csv);
        write_variational_sweep_csv(details, out);
    }
    return 0;
}

// ----------------------------------- zeros ----------------------------------

struct ZerosOptions {
    CommonOptions model;
    int l = 0;
    std::string equilibrium = "minimizer";
    double z_min = -1.0;
    double z_max = 1.0;
    int lines = 21;
    int samples = 401;
    std::string out = "-";
    std::string format = "csv";
    std::string fringes;
};

int run_zeros(const ZerosOptions& opt) {
    require_format(opt.format, "csv", "zeros");
    if (opt.equilibrium != "minimizer" && opt.equilibrium != "paper")
        throw std::invalid_argument("zeros: --equilibrium must be minimizer or paper");
    const ModelParams p = opt.model.params();
    const Equilibrium eq =
        opt.equilibrium == "minimizer" ? equilibrium_minimize(p) : equilibrium_paper(p);

    const ZeroSurface s = make_zero_surface(eq, opt.l);
    ConformalGridSpec grid;
    grid.z_min = opt.z_min;
    grid.z_max = opt.z_max;
    grid.lines_per_family = opt.lines;
    grid.samples_per_line = opt.samples;

    std::ostream* sink = nullptr;
    auto holder = open_sink(opt.out, sink);
    write_curves_csv(conformal_grid(s, grid), *sink);

    if (!opt.fringes.empty()) {
        auto out = open_output_file(opt.fringes);
        out << to_json(fringe_lines(eq, p.j, opt.l)).dump(2) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dicke-model phase-space toolkit: exact and variational ground "
                 "states, Husimi distributions, Wehrl entropies, Husimi zeros"};
    app.require_subcommand(1);

    GroundOptions ground;
    CLI::App* cmd_ground = app.add_subcommand("ground", "diagonalize the ground state");
    add_model_flags(cmd_ground, ground.model);
    cmd_ground->add_option("--e-tol", ground.e_tol, "energy tolerance between cutoffs")
        ->capture_default_str();
    cmd_ground->add_option("--w-tol", ground.w_tol, "occupation tail tolerance")
        ->capture_default_str();
    cmd_ground->add_option("--nc0", ground.n_c0, "starting photon cutoff")
        ->capture_default_str();
    cmd_ground->add_option("--out", ground.out, "write the state as JSON");
    cmd_ground->add_option("--format", ground.format, "output format (json)")
        ->capture_default_str();

    HusimiOptions husimi;
    CLI::App* cmd_husimi = app.add_subcommand("husimi", "sample a Husimi distribution slice");
    add_model_flags(cmd_husimi, husimi.model);
    cmd_husimi->add_option("--method", husimi.method, "exact | variational")
        ->capture_default_str();
    cmd_husimi->add_option("--slice", husimi.slice, "position | momentum")
        ->capture_default_str();
    cmd_husimi->add_option("--alpha-extent", husimi.alpha_extent,
                           "half-width of the alpha axis (0 = auto)");
    cmd_husimi->add_option("--z-extent", husimi.z_extent, "half-width of the z axis")
        ->capture_default_str();
    cmd_husimi->add_option("--nx", husimi.nx, "alpha-axis samples")->capture_default_str();
    cmd_husimi->add_option("--nz", husimi.nz, "z-axis samples")->capture_default_str();
    cmd_husimi->add_option("--out", husimi.out, "output CSV path (- for stdout)")
        ->capture_default_str();
    cmd_husimi->add_option("--format", husimi.format, "output format (csv)")
        ->capture_default_str();

    WehrlOptions wehrl;
    CLI::App* cmd_wehrl =
        app.add_subcommand("wehrl", "sweep the Wehrl entropy over the coupling");
    add_model_flags(cmd_wehrl, wehrl.model);
    cmd_wehrl->add_option("--lambda-from", wehrl.lambda_from, "sweep start")
        ->capture_default_str();
    cmd_wehrl->add_option("--lambda-to", wehrl.lambda_to, "sweep end")->capture_default_str();
    cmd_wehrl->add_option("--steps", wehrl.steps, "number of sweep points")
        ->capture_default_str();
    cmd_wehrl->add_option("--threads", wehrl.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    cmd_wehrl->add_option("--rel-tol", wehrl.rel_tol, "quadrature convergence tolerance")
        ->capture_default_str();
    cmd_wehrl->add_option("--out", wehrl.out, "output CSV path (- for stdout)")
        ->capture_default_str();
    cmd_wehrl->add_option("--format", wehrl.format, "output format (csv)")
        ->capture_default_str();
    cmd_wehrl->add_option("--variational-csv", wehrl.variational_csv,
                          "also write the detailed variational sweep CSV");

    ZerosOptions zeros;
    CLI::App* cmd_zeros =
        app.add_subcommand("zeros", "export the variational Husimi zero surface");
    add_model_flags(cmd_zeros, zeros.model);
    cmd_zeros->add_option("--l", zeros.l, "branch label")->capture_default_str();
    cmd_zeros->add_option("--equilibrium", zeros.equilibrium, "minimizer | paper")
        ->capture_default_str();
    cmd_zeros->add_option("--z-min", zeros.z_min, "grid lower bound")->capture_default_str();
    cmd_zeros->add_option("--z-max", zeros.z_max, "grid upper bound")->capture_default_str();
    cmd_zeros->add_option("--lines", zeros.lines, "grid lines per family")
        ->capture_default_str();
    cmd_zeros->add_option("--samples", zeros.samples, "samples per line")
        ->capture_default_str();
    cmd_zeros->add_option("--out", zeros.out, "curves CSV path (- for stdout)")
        ->capture_default_str();
    cmd_zeros->add_option("--format", zeros.format, "output format (csv)")
        ->capture_default_str();
    cmd_zeros->add_option("--fringes", zeros.fringes, "write fringe-line JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (cmd_ground->parsed()) return run_ground(ground);
        if (cmd_husimi->parsed()) return run_husimi(husimi);
        if (cmd_wehrl->parsed()) return run_wehrl(wehrl);
        if (cmd_zeros->parsed()) return run_zeros(zeros);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NoZerosError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const DegenerateStateError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const SingularInputError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
