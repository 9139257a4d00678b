// commands.hpp
// Subcommand implementations. Each command writes its report to `out`,
// diagnostics to `err`, and returns the process exit code.

#pragma once

#include "io.hpp"

#include <charconv>
#include <functional>
#include <iostream>

namespace ergolab::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kInputError = 2, kNumericalFailure = 3 };

// ---------------------------------------------------------------------------
// Inputs

struct InputOptions {
    std::string state_file;
    std::string hamiltonian_file;
    std::string preset;
    std::string eps;  // comma-separated spectrum
};

struct LoadedInput {
    StateFile state;
    LocalHamiltonians hamiltonians;
    ProductPovm reference_povm;  // presets only: the measurement that defines the example
};

inline std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    ss.imbue(std::locale::classic());
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::istringstream is(item);
        is.imbue(std::locale::classic());
        double v = 0.0;
        if (!(is >> v) || !(is >> std::ws).eof() || !std::isfinite(v))
            throw InputError(std::string(what) + ": cannot parse \"" + item + "\" as a number");
        out.push_back(v);
    }
    if (out.empty()) throw InputError(std::string(what) + ": empty list");
    return out;
}

inline HermitianOperator spectrum_hamiltonian(const std::vector<double>& eps) {
    for (std::size_t k = 1; k < eps.size(); ++k)
        if (eps[k] < eps[k - 1]) throw InputError("--eps: energies must be ascending");
    return HermitianOperator::diagonal(std::span<const double>(eps));
}

inline std::uint64_t parse_seed(const std::string& text, const char* what) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end) throw InputError(std::string(what) + ": \"" + text + "\" is not an unsigned 64-bit integer");
    return v;
}

/// ERGOLAB_SEED if set, otherwise 0.
inline std::uint64_t default_seed() {
    const char* env = std::getenv("ERGOLAB_SEED");
    return env ? parse_seed(env, "ERGOLAB_SEED") : 0;
}

inline StateFile state_file_from(const MultipartiteState& m, const std::string& label) {
    StateFile sf;
    sf.dims = m.system_dims();
    sf.dims.insert(sf.dims.end(), m.ancilla_dims().begin(), m.ancilla_dims().end());
    sf.n_systems = m.n_systems();
    sf.matrix = m.matrix();
    sf.label = label;
    return sf;
}

/// qutrit-qubit, cc-example, or ghz:n,m.
inline LoadedInput make_preset(const std::string& name, const std::string& eps_text) {
    LoadedInput in;
    std::optional<std::vector<double>> eps;
    if (!eps_text.empty()) eps = parse_number_list(eps_text, "--eps");
    auto three_level = [&](std::vector<double> fallback) {
        const std::vector<double> e = eps.value_or(std::move(fallback));
        if (e.size() != 3) throw InputError("--eps: preset " + name + " needs 3 energies");
        return spectrum_hamiltonian(e);
    };
    if (name == "qutrit-qubit") {
        const BipartiteState rho = analytic::qutrit_qubit_state();
        in.state = state_file_from(MultipartiteState(rho.state(), {3}, {2}), "qutrit-qubit");
        in.hamiltonians.terms.push_back(three_level({0.0, 1.0, 1.0}));
        in.reference_povm.locals.push_back(analytic::symmetric_trine_povm());
    } else if (name == "cc-example") {
        const BipartiteState rho = analytic::cc_example_state();
        in.state = state_file_from(MultipartiteState(rho.state(), {3}, {2}), "cc-example");
        in.hamiltonians.terms.push_back(three_level({0.0, 1.0, 2.0}));
        in.reference_povm.locals.push_back(Povm::computational(2));
    } else if (name.rfind("ghz:", 0) == 0) {
        const auto counts = parse_number_list(name.substr(4), "--preset ghz:n,m");
        if (counts.size() != 2 || counts[0] < 1 || counts[1] < 0 || counts[0] != std::floor(counts[0]) || counts[1] != std::floor(counts[1]))
            throw InputError("--preset ghz:n,m needs integers n >= 1, m >= 0");
        MultipartiteState g;
        try {
            g = ghz_state(static_cast<std::size_t>(counts[0]), static_cast<std::size_t>(counts[1]));
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("--preset ") + name + ": " + e.what());
        }
        in.state = state_file_from(g, name);
        const std::vector<double> e = eps.value_or(std::vector<double>{0.0, 1.0});
        if (e.size() != 2) throw InputError("--eps: GHZ preset needs 2 energies per qubit");
        in.hamiltonians.terms.assign(g.n_systems(), spectrum_hamiltonian(e));
        in.reference_povm = computational_product_povm(g);
    } else {
        throw InputError("unknown preset \"" + name + "\" (expected qutrit-qubit, cc-example or ghz:n,m)");
    }
    return in;
}

inline LoadedInput load_input(const InputOptions& opt) {
    if (opt.preset.empty() == opt.state_file.empty()) throw InputError("give exactly one of --state or --preset");
    LoadedInput in;
    if (!opt.preset.empty()) {
        in = make_preset(opt.preset, opt.hamiltonian_file.empty() ? opt.eps : std::string());
    } else {
        in.state = parse_state(read_text(opt.state_file), opt.state_file);
        if (opt.hamiltonian_file.empty()) {
            if (opt.eps.empty()) throw InputError("a state file needs --hamiltonian or --eps");
            in.hamiltonians.terms.assign(in.state.n_systems, spectrum_hamiltonian(parse_number_list(opt.eps, "--eps")));
        }
    }
    if (!opt.hamiltonian_file.empty())
        in.hamiltonians = parse_local_hamiltonians(read_text(opt.hamiltonian_file), opt.hamiltonian_file);
    if (in.hamiltonians.terms.size() != in.state.n_systems)
        throw InputError(std::to_string(in.hamiltonians.terms.size()) + " Hamiltonian(s) for " +
                         std::to_string(in.state.n_systems) + " system(s)");
    for (std::size_t i = 0; i < in.state.n_systems; ++i)
        if (in.hamiltonians.terms[i].dim() != in.state.dims[i])
            throw InputError("Hamiltonian " + std::to_string(i) + " has dimension " + std::to_string(in.hamiltonians.terms[i].dim()) +
                             ", system has " + std::to_string(in.state.dims[i]));
    return in;
}

// ---------------------------------------------------------------------------
// Reports

namespace detail {

inline void line(std::ostream& out, const std::string& key, const std::string& value) {
    out << key;
    for (std::size_t k = key.size(); k < 24; ++k) out << ' ';
    out << value << '\n';
}

inline void line(std::ostream& out, const std::string& key, double value) { line(out, key, format_number(value)); }

inline Json unitaries_to_json(const std::vector<UnitaryOperator>& us) {
    Json out = Json::array();
    for (const auto& u : us) out.push_back(matrix_to_json(u.matrix()));
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ergotropy

struct ErgotropyOptions {
    InputOptions input;
    bool json = false;
};

/// Ergotropy of the system marginal (ancillas traced out); one system only.
inline int cmd_ergotropy(const ErgotropyOptions& opt, std::ostream& out, std::ostream&) {
    const LoadedInput in = load_input(opt.input);
    if (in.state.n_systems != 1) throw InputError("ergotropy expects a single system");
    const MultipartiteState m = to_multipartite(in.state);
    const DensityOperator rho_s = partial_trace(m.as_bipartite(), Subsystem::System);
    const HermitianOperator& h = in.hamiltonians.terms[0];
    const ErgotropyResult r = ergotropy(rho_s, h);
    const double energy = (rho_s.matrix() * h.matrix()).trace().real();
    if (opt.json) {
        Json j{{"energy", energy}, {"passive_energy", r.passive_energy}, {"ergotropy", r.value},
               {"optimal_unitary", matrix_to_json(r.optimal_unitary.matrix())}};
        if (!in.state.label.empty()) j["label"] = in.state.label;
        out << dump(j);
    } else {
        if (!in.state.label.empty()) detail::line(out, "state", in.state.label);
        detail::line(out, "energy", energy);
        detail::line(out, "passive energy", r.passive_energy);
        detail::line(out, "ergotropy", r.value);
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// seesaw

struct SeeSawOptions {
    InputOptions input;
    int restarts = 20;
    std::uint64_t seed = 0;
    std::size_t n_effects = 0;
    double tol = 1e-10;
    int max_iterations = 500;
    std::string init = "random";
    bool json = false;
};

inline Json seesaw_report_to_json(const SeeSawReport& r, std::uint64_t seed, const std::string& init) {
    return Json{{"init", init},
                {"seed", seed},
                {"ergotropy", r.ergotropy},
                {"daemonic_ergotropy", r.objective()},
                {"gain", r.gain()},
                {"gain_is_lower_bound", true},
                {"converged", r.converged},
                {"iterations", r.iterations()},
                {"restart_index", r.restart_index},
                {"restart_objectives", r.restart_objectives},
                {"objective_trace", r.objective_trace},
                {"duality_gaps", r.duality_gaps},
                {"final_povm", povm_to_json(r.final_povm)},
                {"final_unitaries", detail::unitaries_to_json(r.final_unitaries)}};
}

inline int cmd_seesaw(const SeeSawOptions& opt, std::ostream& out, std::ostream&) {
    const LoadedInput in = load_input(opt.input);
    const BipartiteState rho = to_bipartite(in.state);
    const HermitianOperator& h = in.hamiltonians.terms[0];
    if (opt.restarts < 1) throw InputError("--restarts must be at least 1");
    if (opt.max_iterations < 1) throw InputError("--max-iter must be at least 1");
    if (!(opt.tol > 0.0)) throw InputError("--tol must be positive");
    SeeSawConfig config;
    config.restarts = opt.restarts;
    config.seed = opt.seed;
    config.n_effects = opt.n_effects;
    config.convergence_tol = opt.tol;
    config.max_iterations = opt.max_iterations;
    SeeSawReport report;
    if (opt.init == "random") {
        report = multi_start(rho, h, config);
    } else if (opt.init == "adversarial") {
        report = see_saw(rho, h, config, GivenInit{adversarial_init(rho, h, opt.seed)});
        report.restart_objectives = {report.objective()};
    } else {
        throw InputError("--init must be random or adversarial");
    }
    if (opt.json) {
        out << dump(seesaw_report_to_json(report, opt.seed, opt.init));
    } else {
        detail::line(out, "ergotropy", report.ergotropy);
        detail::line(out, "daemonic ergotropy", report.objective());
        detail::line(out, "daemonic gain", format_number(report.gain()) + " (lower bound)");
        detail::line(out, "iterations", std::to_string(report.iterations()) + (report.converged ? " (converged)" : " (not converged)"));
        detail::line(out, "best restart", std::to_string(report.restart_index) + " of " + std::to_string(report.restart_objectives.size()));
        detail::line(out, "effects", std::to_string(report.final_povm.size()));
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// figure2

struct Figure2Options {
    double eps_min = 1.0;
    double eps_max = 3.0;
    int steps = 21;
    std::string out;  // empty or "-" for stdout
    int restarts = 20;
    std::uint64_t seed = 0;
};

inline std::string gain_sweep_csv(const std::vector<GainSweepRow>& rows) {
    std::string csv = "epsilon,gain_pvm_analytic,gain_trine_povm,gain_seesaw\n";
    for (const auto& r : rows)
        csv += format_number(r.epsilon) + "," + format_number(r.gain_pvm_analytic) + "," + format_number(r.gain_trine_povm) +
               "," + format_number(r.gain_seesaw) + "\n";
    return csv;
}

inline int cmd_figure2(const Figure2Options& opt, std::ostream& out, std::ostream&) {
    if (!(opt.eps_min >= 1.0) || !(opt.eps_max >= opt.eps_min)) throw InputError("need 1 <= --eps-min <= --eps-max");
    if (opt.steps < 1) throw InputError("--steps must be at least 1");
    if (opt.restarts < 1) throw InputError("--restarts must be at least 1");
    SeeSawConfig config;
    config.restarts = opt.restarts;
    config.seed = opt.seed;
    const std::string csv = gain_sweep_csv(qutrit_qubit_gain_sweep(opt.eps_min, opt.eps_max, opt.steps, config));
    if (opt.out.empty() || opt.out == "-") {
        out << csv;
    } else {
        write_text(opt.out, csv);
        out << "wrote " << opt.steps << " rows to " << opt.out << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// qc

struct QcOptions {
    InputOptions input;
    double tol = 1e-8;
    bool json = false;
};

inline int cmd_qc(const QcOptions& opt, std::ostream& out, std::ostream&) {
    const LoadedInput in = load_input(opt.input);
    const BipartiteState rho = to_bipartite(in.state);
    const HermitianOperator& h = in.hamiltonians.terms[0];
    const analytic::QcDetection det = analytic::detect_qc(rho, opt.tol);
    const double w = ergotropy(partial_trace(rho, Subsystem::System), h).value;
    Json j{{"ergotropy", w}, {"tolerance", opt.tol}};
    if (const auto* qc = std::get_if<analytic::QcDecomposition>(&det)) {
        const analytic::QcOptimum best = analytic::qc_daemonic_optimum(*qc, h);
        Json blocks = Json::array();
        for (const auto& b : qc->blocks) blocks.push_back(matrix_to_json(b.matrix()));
        j["quantum_classical"] = true;
        j["residual"] = qc->residual;
        j["ancilla_basis"] = matrix_to_json(qc->ancilla_basis.matrix());
        j["blocks"] = std::move(blocks);
        j["daemonic_ergotropy"] = best.value;
        j["gain"] = best.gain;
        j["measurement"] = povm_to_json(best.measurement);
        if (!opt.json) {
            detail::line(out, "verdict", "quantum-classical");
            detail::line(out, "residual", qc->residual);
            detail::line(out, "ergotropy", w);
            detail::line(out, "daemonic ergotropy", best.value);
            detail::line(out, "daemonic gain", best.gain);
            detail::line(out, "measurement", "projective, " + std::to_string(best.measurement.size()) + " outcomes in the ancilla eigenbasis");
        }
    } else {
        const auto& nq = std::get<analytic::NotQc>(det);
        j["quantum_classical"] = false;
        j["residual"] = nq.residual;
        j["ancilla_basis"] = matrix_to_json(nq.ancilla_basis.matrix());
        if (!opt.json) {
            detail::line(out, "verdict", "not quantum-classical");
            detail::line(out, "residual", nq.residual);
            detail::line(out, "ergotropy", w);
        }
    }
    if (opt.json) out << dump(j);
    return kOk;
}

// ---------------------------------------------------------------------------
// multipartite

struct MultipartiteOptions {
    InputOptions input;
    std::string povm_file;
    bool optimize = false;
    int restarts = 20;
    std::uint64_t seed = 0;
    bool json = false;
};

/// Evaluates a given product POVM, optimizes one, or (neither given) uses
/// computational-basis PVMs on every ancilla.
inline int cmd_multipartite(const MultipartiteOptions& opt, std::ostream& out, std::ostream&) {
    if (opt.optimize && !opt.povm_file.empty()) throw InputError("give at most one of --povm-file and --optimize");
    const LoadedInput in = load_input(opt.input);
    const MultipartiteState rho = to_multipartite(in.state);
    ProductPovm povm;
    std::string source;
    if (opt.optimize) {
        if (opt.restarts < 1) throw InputError("--restarts must be at least 1");
        SeeSawConfig config;
        config.restarts = opt.restarts;
        config.seed = opt.seed;
        povm = local_see_saw(rho, in.hamiltonians, config).povm;
        source = "optimized";
    } else if (!opt.povm_file.empty()) {
        povm = parse_product_povm(read_text(opt.povm_file), opt.povm_file);
        source = "file";
    } else {
        povm = computational_product_povm(rho);
        source = "computational";
    }
    MultipartiteDaemonic result;
    try {
        result = multipartite_daemonic_breakdown(rho, in.hamiltonians, povm);
    } catch (const DimensionMismatch& e) {
        throw InputError(e.what());
    }
    const double baseline = multipartite_local_ergotropy(rho, in.hamiltonians);
    if (opt.json) {
        out << dump(Json{{"measurement_source", source},
                         {"daemonic_ergotropy", result.value},
                         {"per_system", result.per_system},
                         {"local_ergotropy", baseline},
                         {"gain", result.value - baseline},
                         {"povm", product_povm_to_json(povm)}});
    } else {
        detail::line(out, "measurement", source);
        detail::line(out, "daemonic ergotropy", result.value);
        for (std::size_t i = 0; i < result.per_system.size(); ++i) detail::line(out, "  system " + std::to_string(i), result.per_system[i]);
        detail::line(out, "local ergotropy", baseline);
        detail::line(out, "gain", result.value - baseline);
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateOptions {
    std::string suite = "all";
    std::uint64_t seed = 0;
};

inline int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream&) {
    const auto suite = validation::parse_suite(opt.suite);
    if (!suite) throw InputError("--suite must be paper, properties or all");
    std::size_t failed = 0;
    const auto results = validation::run_suite(*suite, validation::Options{opt.seed}, [&](const validation::CriterionResult& r) {
        out << (r.passed ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << ": " << r.detail << '\n' << std::flush;
        if (!r.passed) ++failed;
    });
    out << results.size() - failed << "/" << results.size() << " passed\n";
    return failed == 0 ? kOk : kValidationFailure;
}

// ---------------------------------------------------------------------------
// export

struct ExportOptions {
    std::string preset;
    std::string eps;
    std::string state_out;
    std::string hamiltonian_out;
    std::string povm_out;
};

/// Writes a preset's state, Hamiltonian(s) and reference measurement as files.
/// With no output paths the state goes to stdout.
inline int cmd_export(const ExportOptions& opt, std::ostream& out, std::ostream&) {
    if (opt.preset.empty()) throw InputError("--preset is required");
    const LoadedInput in = make_preset(opt.preset, opt.eps);
    if (opt.state_out.empty() && opt.hamiltonian_out.empty() && opt.povm_out.empty()) {
        out << dump(state_to_json(in.state));
        return kOk;
    }
    if (!opt.state_out.empty()) write_text(opt.state_out, dump(state_to_json(in.state)));
    if (!opt.hamiltonian_out.empty()) {
        Json h;
        if (in.hamiltonians.terms.size() == 1) {
            h = hamiltonian_to_json(in.hamiltonians.terms[0]);
        } else {
            Json locals = Json::array();
            for (const auto& t : in.hamiltonians.terms) locals.push_back(hamiltonian_to_json(t));
            h = Json{{"locals", std::move(locals)}};
        }
        write_text(opt.hamiltonian_out, dump(h));
    }
    if (!opt.povm_out.empty()) {
        const Json p = in.reference_povm.locals.size() == 1 ? povm_to_json(in.reference_povm.locals[0])
                                                             : product_povm_to_json(in.reference_povm);
        write_text(opt.povm_out, dump(p));
    }
    for (const auto* path : {&opt.state_out, &opt.hamiltonian_out, &opt.povm_out})
        if (!path->empty()) out << "wrote " << *path << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

/// Runs a command and maps exceptions to exit codes.
inline int guarded(const std::function<int()>& command, std::ostream& err) {
    try {
        return command();
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const SdpFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace ergolab::cli
