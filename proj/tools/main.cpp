// ergolab command-line front end.

#include "ergolab/commands.hpp"

#include <CLI11.hpp>

namespace {

using namespace ergolab::cli;

void add_input(CLI::App* cmd, InputOptions& in, bool multi = false) {
    cmd->add_option("--state", in.state_file, "State JSON file");
    cmd->add_option("--hamiltonian", in.hamiltonian_file,
                    multi ? "Hamiltonian JSON file ({\"locals\": [...]} for several systems)" : "Hamiltonian JSON file");
    cmd->add_option("--preset", in.preset, "Built-in state: qutrit-qubit, cc-example or ghz:n,m");
    cmd->add_option("--eps", in.eps, "Comma-separated Hamiltonian spectrum, ascending");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ergotropy and daemonic ergotropy of finite-dimensional quantum states"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string seed_text;
    app.add_option("--seed", seed_text, "Master seed (default: $ERGOLAB_SEED or 0)");

    ErgotropyOptions ergo;
    auto* c_ergo = app.add_subcommand("ergotropy", "Ergotropy of the system marginal");
    add_input(c_ergo, ergo.input);
    c_ergo->add_flag("--json", ergo.json, "JSON output");

    SeeSawOptions ss;
    auto* c_ss = app.add_subcommand("seesaw", "Optimize the ancilla measurement by see-saw");
    add_input(c_ss, ss.input);
    c_ss->add_option("--restarts", ss.restarts, "Random restarts")->capture_default_str();
    c_ss->add_option("--n-effects", ss.n_effects, "Number of effects (0: d_A^2)")->capture_default_str();
    c_ss->add_option("--tol", ss.tol, "Convergence tolerance on the objective")->capture_default_str();
    c_ss->add_option("--max-iter", ss.max_iterations, "Iteration limit per run")->capture_default_str();
    c_ss->add_option("--init", ss.init, "random or adversarial")->capture_default_str();
    c_ss->add_flag("--json", ss.json, "JSON report");

    Figure2Options fig;
    auto* c_fig = app.add_subcommand("figure2", "Qutrit-qubit gain versus the highest energy level (CSV)");
    c_fig->add_option("--eps-min", fig.eps_min)->capture_default_str();
    c_fig->add_option("--eps-max", fig.eps_max)->capture_default_str();
    c_fig->add_option("--steps", fig.steps, "Number of rows, both ends included")->capture_default_str();
    c_fig->add_option("--out", fig.out, "CSV path (default: stdout)");
    c_fig->add_option("--restarts", fig.restarts, "See-saw restarts per row")->capture_default_str();

    QcOptions qc;
    auto* c_qc = app.add_subcommand("qc", "Quantum-classical test and closed-form optimum");
    add_input(c_qc, qc.input);
    c_qc->add_option("--tol", qc.tol, "Off-block residual tolerance")->capture_default_str();
    c_qc->add_flag("--json", qc.json, "JSON output");

    MultipartiteOptions mp;
    auto* c_mp = app.add_subcommand("multipartite", "Daemonic ergotropy with local measurements and local unitaries");
    add_input(c_mp, mp.input, true);
    c_mp->add_option("--povm-file", mp.povm_file, "Product POVM JSON file");
    c_mp->add_flag("--optimize", mp.optimize, "Optimize the local POVMs");
    c_mp->add_option("--restarts", mp.restarts, "Restarts for --optimize")->capture_default_str();
    c_mp->add_flag("--json", mp.json, "JSON output");

    ValidateOptions val;
    auto* c_val = app.add_subcommand("validate", "Run the acceptance checks");
    c_val->add_option("--suite", val.suite, "paper, properties or all")->capture_default_str();

    ExportOptions ex;
    auto* c_ex = app.add_subcommand("export", "Write a preset as state/Hamiltonian/POVM files");
    c_ex->add_option("--preset", ex.preset, "qutrit-qubit, cc-example or ghz:n,m")->required();
    c_ex->add_option("--eps", ex.eps, "Comma-separated Hamiltonian spectrum");
    c_ex->add_option("--state-out", ex.state_out);
    c_ex->add_option("--hamiltonian-out", ex.hamiltonian_out);
    c_ex->add_option("--povm-out", ex.povm_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    return guarded(
        [&]() -> int {
            const std::uint64_t seed = seed_text.empty() ? default_seed() : parse_seed(seed_text, "--seed");
            ss.seed = fig.seed = mp.seed = val.seed = seed;
            if (*c_ergo) return cmd_ergotropy(ergo, std::cout, std::cerr);
            if (*c_ss) return cmd_seesaw(ss, std::cout, std::cerr);
            if (*c_fig) return cmd_figure2(fig, std::cout, std::cerr);
            if (*c_qc) return cmd_qc(qc, std::cout, std::cerr);
            if (*c_mp) return cmd_multipartite(mp, std::cout, std::cerr);
            if (*c_val) return cmd_validate(val, std::cout, std::cerr);
            return cmd_export(ex, std::cout, std::cerr);
        },
        std::cerr);
}
