// scatterwave: run the scattering scheme, verification suites and experiments.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "scatterwave/scatterwave.hpp"

namespace fs = std::filesystem;
using namespace scatterwave;

namespace {

struct RunOptions {
    double a = -15.0;
    double b = 25.0;
    std::size_t n = 1024;
    double horizon = 20.0;
    std::string medium = "ramp";
    double zeta = 1.0;
    std::string medium_file;
    std::uint64_t seed = 7;
    std::size_t jumps = 40;
    double lo = 1.0;
    double hi = 10.0;
    std::string data = "gaussian";
    std::string data_file;
    double center = -10.0;
    double amplitude = 2.0;
    double rate = 0.05;
    std::string direction = "right";
    std::string mode = "regular";
    std::string out = "solution.csv";
    std::string format = "long";
    std::string ledger;
    std::string dump_matrix;
};

Medium make_medium(const RunOptions& o) {
    if (o.medium == "constant") return constant_medium(o.zeta);
    if (o.medium == "ramp") return ramp_medium();
    if (o.medium == "random") return random_step_medium(o.seed, o.jumps, o.lo, o.hi);
    if (o.medium == "file") {
        if (o.medium_file.empty()) throw ParameterError("--medium file requires --medium-file");
        if (!fs::exists(o.medium_file)) throw IoError("medium file not found: " + o.medium_file);
        return io::read_medium_file(o.medium_file);
    }
    throw ParameterError("unknown --medium '" + o.medium + "'");
}

void print_grid(const Grids& g) {
    std::cout << "delta=" << detail::shortest(g.space.delta()) << " m=" << g.time.m()
              << " t_m=" << detail::shortest(g.time.final_time()) << "\n";
}

int cmd_run(const RunOptions& o) {
    auto g = build_grid(o.a, o.b, o.n, o.horizon);
    Medium medium = make_medium(o);
    MediumSamples samples = sample_medium(medium, g.space);
    ReflectionWeights weights = compute_weights(samples);
    const bool dirac = o.mode == "dirac";
    if (!dirac && o.mode != "regular") throw ParameterError("--mode must be regular or dirac");
    if (o.direction != "right" && o.direction != "left") throw ParameterError("--direction must be right or left");
    const bool right = o.direction == "right";

    std::optional<SolutionField> field;
    DiracCombData comb;
    if (o.data == "gaussian") {
        if (dirac) throw ParameterError("--data gaussian needs --mode regular");
        Sampler src = gaussian(o.amplitude, o.rate, o.center);
        RegularData data{right ? src : zero_sampler(), right ? zero_sampler() : src};
        field = run(initialize(data, g.space, g.time), weights, g.space, g.time);
    } else if (o.data == "dirac") {
        if (!dirac) throw ParameterError("--data dirac needs --mode dirac");
        comb = comb_from_positions({{o.center, right ? o.amplitude : 0.0, right ? 0.0 : o.amplitude}}, g.space);
        field = run_dirac(comb, weights, g.space, g.time);
    } else if (o.data == "file") {
        if (o.data_file.empty()) throw ParameterError("--data file requires --data-file");
        if (!fs::exists(o.data_file)) throw IoError("data file not found: " + o.data_file);
        io::FileData fd = io::read_data_file(o.data_file);
        if ((fd.kind == io::FileData::Kind::comb) != dirac) {
            throw ParameterError("comb files need --mode dirac; x,alpha,beta and x,f,g files need --mode regular");
        }
        if (fd.kind == io::FileData::Kind::comb) {
            comb = fd.comb;
            field = run_dirac(comb, weights, g.space, g.time);
        } else {
            RegularData data = fd.kind == io::FileData::Kind::cauchy
                                   ? convert_fg(fd.regular.alpha, fd.regular.beta, medium, g.space, g.time)
                                   : fd.regular;
            field = run(initialize(data, g.space, g.time), weights, g.space, g.time);
        }
    } else {
        throw ParameterError("unknown --data '" + o.data + "'");
    }

    if (o.format != "long" && o.format != "dense") throw ParameterError("--format must be long or dense");
    io::write_atomic(o.out, o.format == "long" ? io::field_long_csv(*field) : io::field_dense_csv(*field));
    if (!o.ledger.empty()) {
        if (!dirac) throw ParameterError("--ledger is only available with --mode dirac");
        ImpulseLedger ledger;
        trace_dirac_exact(comb, weights, g.space, g.time, &ledger);
        io::write_atomic(o.ledger, io::ledger_csv(ledger));
    }
    if (!o.dump_matrix.empty()) {
        if (o.n > kDenseLimitN) throw SizeError("--dump-matrix needs n <= " + std::to_string(kDenseLimitN));
        io::write_atomic(o.dump_matrix, io::matrix_csv(propagation_matrix(weights)));
    }
    print_grid(g);
    std::cout << "wrote " << o.out << "\n";
    return 0;
}

int cmd_verify(const VerifyOptions& o) {
    if (o.trials == 0) std::cerr << "warning: --trials 0, every suite passes vacuously\n";
    auto results = run_verification(o);
    bool ok = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " worst=" << detail::shortest(r.worst)
                  << (r.name == "spectral-radius" ? " (must be < " : " (must be <= ") << detail::shortest(r.tolerance)
                  << ") trials=" << r.trials << "\n";
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

fs::path in_dir(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return fs::path(dir) / name;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering scheme for the 1D variable-impedance wave equation"};
    app.require_subcommand(1);

    RunOptions ro;
    auto* run_cmd = app.add_subcommand("run", "Propagate initial data through a medium and write the solution field");
    run_cmd->add_option("--a", ro.a, "Left end of the domain")->capture_default_str();
    run_cmd->add_option("--b", ro.b, "Right end of the domain")->capture_default_str();
    run_cmd->add_option("--n", ro.n, "Number of cells")->capture_default_str();
    run_cmd->add_option("--T", ro.horizon, "Time horizon")->capture_default_str();
    run_cmd->add_option("--medium", ro.medium, "constant | ramp | random | file")->capture_default_str();
    run_cmd->add_option("--zeta", ro.zeta, "Impedance of the constant medium")->capture_default_str();
    run_cmd->add_option("--medium-file", ro.medium_file, "Breakpoint CSV with header x,zeta");
    run_cmd->add_option("--seed", ro.seed, "Seed for the random medium")->capture_default_str();
    run_cmd->add_option("--jumps", ro.jumps, "Jump count of the random medium")->capture_default_str();
    run_cmd->add_option("--lo", ro.lo, "Left end of the random layered zone")->capture_default_str();
    run_cmd->add_option("--hi", ro.hi, "Right end of the random layered zone")->capture_default_str();
    run_cmd->add_option("--data", ro.data, "gaussian | dirac | file")->capture_default_str();
    run_cmd->add_option("--data-file", ro.data_file, "CSV with header x,alpha,beta or x,f,g or offset,c,d");
    run_cmd->add_option("--center", ro.center, "Gaussian centre / Dirac position")->capture_default_str();
    run_cmd->add_option("--amplitude", ro.amplitude, "Gaussian amplitude / Dirac weight")->capture_default_str();
    run_cmd->add_option("--rate", ro.rate, "Gaussian decay rate")->capture_default_str();
    run_cmd->add_option("--direction", ro.direction, "right | left")->capture_default_str();
    run_cmd->add_option("--mode", ro.mode, "regular | dirac")->capture_default_str();
    run_cmd->add_option("--out", ro.out, "Output CSV path")->capture_default_str();
    run_cmd->add_option("--format", ro.format, "long (k,t,j,x,u) | dense")->capture_default_str();
    run_cmd->add_option("--ledger", ro.ledger, "Write the impulse ledger CSV (dirac mode)");
    run_cmd->add_option("--dump-matrix", ro.dump_matrix, "Write the dense propagation matrix CSV");

    VerifyOptions vo;
    auto* verify_cmd = app.add_subcommand("verify", "Run the spectral and oracle verification suites");
    verify_cmd->add_option("--n", vo.n, "Cells per trial medium")->capture_default_str();
    verify_cmd->add_option("--trials", vo.trials, "Number of random trials")->capture_default_str();
    verify_cmd->add_option("--seed", vo.seed, "Seed")->capture_default_str();
    verify_cmd->add_option("--weight-limit", vo.weight_limit, "Weights drawn uniformly in [-limit, limit]")
        ->capture_default_str();
    verify_cmd->add_flag("--inject-bad-weight", vo.corrupt_weight, "Set r[0] = 1 in the first trial");

    auto* exp_cmd = app.add_subcommand("experiment", "Reproduce the ramp, oscillatory, convergence or timing runs");
    exp_cmd->require_subcommand(1);
    std::string out_dir = ".";
    exp_cmd->add_option("--out-dir", out_dir, "Directory for experiment artifacts")->capture_default_str();

    int ramp_p = 10;
    auto* ramp_cmd = exp_cmd->add_subcommand("ramp", "Dirac pulse crossing the smooth ramp");
    ramp_cmd->add_option("--p", ramp_p, "Resolution n = 2^p, 7 <= p <= 15")->capture_default_str();

    int pmin = 7, pmax = 12, pref = 14;
    auto* conv_cmd = exp_cmd->add_subcommand("convergence", "Relative rms error E(n) of the ramp waveform");
    conv_cmd->add_option("--pmin", pmin, "Smallest level")->capture_default_str();
    conv_cmd->add_option("--pmax", pmax, "Largest level")->capture_default_str();
    conv_cmd->add_option("--pref", pref, "Reference level (>= pmax + 2)")->capture_default_str();

    std::uint64_t osc_seed = 7;
    double osc_shift = 0.0;
    std::size_t osc_n = 4096;
    auto* osc_cmd = exp_cmd->add_subcommand("oscillatory", "Gaussian through a random 40-jump layered zone");
    osc_cmd->add_option("--seed", osc_seed, "Medium seed")->capture_default_str();
    osc_cmd->add_option("--shift", osc_shift, "Source shift to the right (15 starts inside the zone)")
        ->capture_default_str();
    osc_cmd->add_option("--n", osc_n, "Number of cells")->capture_default_str();

    std::vector<std::size_t> perf_n{1024, 2048, 4096};
    double perf_T = 20.0;
    auto* perf_cmd = exp_cmd->add_subcommand("perf", "Wall time against grid size");
    perf_cmd->add_option("--n", perf_n, "Comma-separated ascending grid sizes")->delimiter(',')->capture_default_str();
    perf_cmd->add_option("--T", perf_T, "Time horizon")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(ro);
        if (*verify_cmd) return cmd_verify(vo);
        if (*ramp_cmd) {
            RampResult res = ramp_experiment(ramp_p);
            io::write_atomic(in_dir(out_dir, "ramp_params.txt"),
                             io::params_text({{"experiment", "ramp"},
                                              {"p", std::to_string(ramp_p)},
                                              {"a", io::format_double(RampScenario::a)},
                                              {"b", io::format_double(RampScenario::b)},
                                              {"T", io::format_double(RampScenario::horizon)},
                                              {"source", io::format_double(RampScenario::source)},
                                              {"display_scale", io::format_double(RampScenario::display_scale)}}));
            io::write_atomic(in_dir(out_dir, "ramp_before.csv"), io::snapshot_csv(res.before));
            io::write_atomic(in_dir(out_dir, "ramp_after.csv"), io::snapshot_csv(res.after));
            std::size_t singular = 0;
            for (auto s : res.after.singular) singular += s;
            std::cout << "singular nodes after traversal: " << singular << "\n";
            return 0;
        }
        if (*conv_cmd) {
            ConvergenceReport rep = convergence_study(pmin, pmax, pref);
            io::write_atomic(in_dir(out_dir, "convergence_params.txt"),
                             io::params_text({{"experiment", "convergence"},
                                              {"pmin", std::to_string(pmin)},
                                              {"pmax", std::to_string(pmax)},
                                              {"pref", std::to_string(pref)}}));
            io::write_atomic(in_dir(out_dir, "convergence.csv"), io::convergence_csv(rep));
            for (const auto& e : rep.entries) {
                std::cout << "n=" << e.n << " E=" << detail::shortest(e.error)
                          << " E*n=" << detail::shortest(e.error * static_cast<double>(e.n)) << "\n";
            }
            std::cout << "slope=" << detail::shortest(rep.slope) << " constant=" << detail::shortest(rep.constant)
                      << " mean(E*n)=" << detail::shortest(rep.mean_scaled_error) << "\n";
            return 0;
        }
        if (*osc_cmd) {
            auto snaps = oscillatory_experiment(osc_seed, osc_shift, osc_n);
            io::write_atomic(in_dir(out_dir, "oscillatory_params.txt"),
                             io::params_text({{"experiment", "oscillatory"},
                                              {"seed", std::to_string(osc_seed)},
                                              {"shift", detail::shortest(osc_shift)},
                                              {"n", std::to_string(osc_n)}}));
            for (std::size_t i = 0; i < snaps.size(); ++i) {
                io::write_atomic(in_dir(out_dir, "oscillatory_" + std::to_string(i) + ".csv"),
                                 io::snapshot_csv(snaps[i]));
                std::cout << "t=" << detail::shortest(snaps[i].time)
                          << " max_jump=" << detail::shortest(jump_metric(snaps[i])) << "\n";
            }
            return 0;
        }
        if (*perf_cmd) {
            auto timings = performance_probe(perf_n, perf_T);
            io::write_atomic(in_dir(out_dir, "timing.csv"), io::timing_csv(timings));
            for (const auto& t : timings) std::cout << "n=" << t.n << " seconds=" << detail::shortest(t.seconds) << "\n";
            return 0;
        }
    } catch (const scatterwave::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
