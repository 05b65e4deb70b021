#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qdicke/errors.hpp"
#include "qdicke/serialize.hpp"
#include "qdicke/suites.hpp"
#include "qdicke/synth_qac0.hpp"
#include "qdicke/synth_qac0f.hpp"

using json = nlohmann::ordered_json;
using namespace qdicke;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitResourceLimit = 3;

int default_max_qubits() {
    if (const char* env = std::getenv("QDICKE_MAX_QUBITS")) {
        try {
            return std::stoi(env);
        } catch (...) {
            std::cerr << "ignoring malformed QDICKE_MAX_QUBITS\n";
        }
    }
    return StateVector::kDefaultMaxQubits;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// "3..8" or "5" -> [lo, hi]
std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int v = std::stoi(text);
        return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

json config_json(const json& fields, std::uint64_t seed) {
    json j = fields;
    j["seed"] = seed;
    return j;
}

json meta_json() {
    json j;
    j["timestamp_unix"] = static_cast<long long>(std::time(nullptr));
    return j;
}

struct SynthArgs {
    std::string model = "qac0";
    int n = 0, k = 0;
    int M = 0;  // 0: choose automatically
    std::string m_mode = "desk";
    double gamma_floor = 0.5;
    std::string schedule = "seq";
    std::string cswap = "seq";
    std::string oracle = "semantic";
    double epsilon = 0.0;  // > 0: approximate W synthesis
    std::string family_path;
    std::uint64_t seed = 0;
    bool have_seed = false;
    int max_qubits = 0;
    bool simulate = true;
    std::string out_circuit = "circuit.json";
    std::string out_report = "report.json";
};

int cmd_synth(const SynthArgs& a) {
    SynthesisConfig cfg;
    cfg.max_qubits = a.max_qubits;
    cfg.schedule = a.schedule == "par" ? Schedule::Parallel : Schedule::Sequential;
    cfg.seed = a.seed;

    json report;
    Circuit circuit;
    double fidelity_value = -1.0;

    if (a.model == "qac0" && a.epsilon > 0.0) {
        if (!a.have_seed && a.family_path.empty()) {
            std::cerr << "approximate synthesis is randomized: pass --seed or --family\n";
            return kExitConfigError;
        }
        const GroverRounds rounds = grover_rounds(1);
        const AngleSolution sol = solve_theta(a.n, 1, rounds.c_target);
        DerandomizedFamily family;
        if (!a.family_path.empty()) {
            family.family = family_from_json(read_file(a.family_path));
            family.weighted_error = gadget_error_profile(family.family, sol.theta).weighted_error;
            family.trials = 1;
        } else {
            family = derandomize_family(a.n, choose_t(a.epsilon / 9.0), sol.theta, 200, a.seed);
        }
        WApproxConfig wcfg;
        wcfg.base = cfg;
        const WApproxSynthesis synth = synth_w_approx(a.n, a.epsilon, family, wcfg);
        circuit = synth.circuit;
        report["n"] = a.n;
        report["k"] = 1;
        report["epsilon"] = a.epsilon;
        report["t"] = family.family.t;
        report["family_weighted_error"] = family.weighted_error;
        report["theta"] = synth.angles.theta;
        report["c_target"] = synth.angles.c_target;
        report["grover_rounds"] = synth.angles.grover_rounds;
        report["depth"] = synth.report.depth;
        report["ancillae"] = synth.report.ancilla_count;
        report["notes"] = synth.report.notes;
    } else if (a.model == "qac0") {
        if (std::min(a.k, a.n - a.k) > 4) {
            std::cerr << "qac0 mode handles weights with min(k, n-k) <= 4 only: the reduction "
                         "amplifies a fixed initial overlap, and that overlap is no longer "
                         "bounded below by a constant once the weight grows with n\n";
            return kExitConfigError;
        }
        const DickeSynthesis synth = synth_dicke_qac0(a.n, a.k, cfg);
        circuit = synth.circuit;
        report["n"] = a.n;
        report["k"] = a.k;
        report["theta"] = synth.angles.theta;
        report["c_target"] = synth.angles.c_target;
        report["grover_rounds"] = synth.angles.grover_rounds;
        report["depth"] = synth.report.depth;
        report["ancillae"] = synth.report.ancilla_count;
        report["notes"] = synth.report.notes;
    } else {
        Qac0fConfig fcfg;
        fcfg.max_qubits = a.max_qubits;
        fcfg.cswap = a.cswap == "par" ? CswapMode::Parallel
                     : a.cswap == "fanout" ? CswapMode::Fanout
                                           : CswapMode::Sequential;
        fcfg.oracle = a.oracle == "circuit" ? OracleImpl::CircuitK : OracleImpl::Semantic;
        fcfg.m_mode = a.m_mode == "paper" ? MMode::Paper : MMode::Desk;
        fcfg.desk_gamma_floor = a.gamma_floor;
        const int M = a.M > 0 ? a.M : choose_M(a.n, a.k, fcfg.m_mode, fcfg.desk_gamma_floor);
        const Qac0fSynthesis synth = synth_dicke_qac0f(a.n, a.k, M, fcfg);
        circuit = synth.circuit;
        report["n"] = a.n;
        report["k"] = a.k;
        report["M"] = M;
        report["gamma"] = synth.tuning.gamma;
        report["gamma_tilde"] = synth.tuning.gamma_tilde;
        report["oaa_rounds"] = synth.tuning.oaa_rounds;
        report["depth"] = synth.report.depth;
        report["ancillae"] = synth.report.ancilla_count;
        report["layout"] = json::parse(synth.layout.to_json());
        report["notes"] = synth.report.notes;
    }

    if (a.simulate && static_cast<int>(circuit.qubit_count) <= a.max_qubits) {
        const StateVector state = run(circuit, a.max_qubits);
        std::vector<QubitId> system;
        for (QubitId q = 0; q < circuit.qubit_count; ++q) {
            if (circuit.registers.role(q) == Role::System) system.push_back(q);
        }
        const int n_sys = static_cast<int>(system.size());
        const int k_target = a.model == "qac0" && a.epsilon > 0.0 ? 1 : a.k;
        fidelity_value =
            reduced_overlap(state, system, dicke_state(n_sys, k_target)).value;
        report["fidelity"] = fidelity_value;
    } else {
        report["fidelity"] = nullptr;
        report["notes"].push_back("not simulated (beyond qubit cap or --no-simulate)");
    }

    report["config"] = config_json(json{{"model", a.model},
                                        {"n", a.n},
                                        {"k", a.k},
                                        {"schedule", a.schedule},
                                        {"max_qubits", a.max_qubits}},
                                   a.seed);
    report["meta"] = meta_json();
    write_file(a.out_circuit, circuit_to_json(circuit));
    write_file(a.out_report, report.dump(2));
    std::cout << "wrote " << a.out_circuit << " and " << a.out_report << "\n";
    if (fidelity_value >= 0.0) std::cout << "fidelity " << fidelity_value << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constant-depth Dicke state circuit synthesis over global-gate models"};
    app.require_subcommand(1);

    // --- synth ---
    SynthArgs synth_args;
    synth_args.max_qubits = default_max_qubits();
    CLI::App* synth = app.add_subcommand("synth", "synthesize a Dicke preparation circuit");
    synth->add_option("--model", synth_args.model, "qac0 | qac0f")
        ->check(CLI::IsMember({"qac0", "qac0f"}));
    synth->add_option("--n", synth_args.n, "number of system qubits")->required();
    synth->add_option("--k", synth_args.k, "Hamming weight");
    synth->add_option("--M", synth_args.M, "qac0f block count (default: chosen by --mode)");
    synth->add_option("--mode", synth_args.m_mode, "qac0f block policy: paper | desk")
        ->check(CLI::IsMember({"paper", "desk"}));
    synth->add_option("--gamma-floor", synth_args.gamma_floor, "desk-mode gamma floor");
    synth->add_option("--schedule", synth_args.schedule, "threshold layout: seq | par")
        ->check(CLI::IsMember({"seq", "par"}));
    synth->add_option("--cswap", synth_args.cswap, "qac0f extraction: seq | fanout | par")
        ->check(CLI::IsMember({"seq", "fanout", "par"}));
    synth->add_option("--oracle", synth_args.oracle, "qac0f weight oracle: semantic | circuit")
        ->check(CLI::IsMember({"semantic", "circuit"}));
    synth->add_option("--epsilon", synth_args.epsilon,
                      "approximate W synthesis with this error budget (qac0, k = 1)");
    synth->add_option("--family", synth_args.family_path, "subset family JSON (approximate mode)");
    auto* seed_opt = synth->add_option("--seed", synth_args.seed, "RNG seed (randomized modes)");
    synth->add_option("--max-qubits", synth_args.max_qubits, "simulator qubit cap");
    synth->add_flag("!--no-simulate", synth_args.simulate, "skip the verification simulation");
    synth->add_option("--out-circuit", synth_args.out_circuit, "circuit JSON path");
    synth->add_option("--out-report", synth_args.out_report, "synthesis report path");

    // --- verify ---
    std::string verify_suite = "all";
    std::string verify_out;
    int verify_max_qubits = default_max_qubits();
    std::uint64_t verify_seed = 20250810;
    CLI::App* verify = app.add_subcommand("verify", "run a verdict suite; exit 0 iff all pass");
    verify->add_option("--suite", verify_suite, "suite name or 'all'");
    verify->add_option("--out", verify_out, "verdict JSON-lines path");
    verify->add_option("--max-qubits", verify_max_qubits, "simulator qubit cap");
    verify->add_option("--seed", verify_seed, "seed for randomized verdicts");

    // --- sweep ---
    std::string sweep_model = "qac0";
    std::string sweep_n = "3..8";
    std::string sweep_k = "1";
    double sweep_gamma_floor = 0.5;
    std::string sweep_schedule = "seq";
    int sweep_max_qubits = default_max_qubits();
    bool sweep_simulate = true;
    CLI::App* sweep = app.add_subcommand("sweep", "grid synthesis: depth/ancilla/fidelity table");
    sweep->add_option("--model", sweep_model, "qac0 | qac0f")
        ->check(CLI::IsMember({"qac0", "qac0f"}));
    sweep->add_option("--n", sweep_n, "range, e.g. 3..8");
    sweep->add_option("--k", sweep_k, "range, e.g. 1..2");
    sweep->add_option("--gamma-floor", sweep_gamma_floor, "qac0f desk gamma floor");
    sweep->add_option("--schedule", sweep_schedule, "qac0 threshold layout: seq | par");
    sweep->add_option("--max-qubits", sweep_max_qubits, "simulator qubit cap");
    sweep->add_flag("!--no-simulate", sweep_simulate, "skip fidelity simulation");

    // --- derandomize ---
    int der_n = 0;
    double der_epsilon = 0.5;
    int der_trials = 200;
    std::uint64_t der_seed = 0;
    std::string der_out = "family.json";
    CLI::App* derand = app.add_subcommand("derandomize", "search for a low-error subset family");
    derand->add_option("--n", der_n, "input length")->required();
    derand->add_option("--epsilon", der_epsilon, "target error (sets t = choose_t(epsilon/9))");
    derand->add_option("--trials", der_trials, "families sampled");
    derand->add_option("--seed", der_seed, "RNG seed")->required();
    derand->add_option("--out", der_out, "family JSON path");

    // --- export ---
    std::string export_in, export_out = "circuit.txt";
    CLI::App* exp = app.add_subcommand("export", "circuit JSON -> flat gate list (expands macros)");
    exp->add_option("--in", export_in, "circuit JSON path")->required();
    exp->add_option("--out", export_out, "gate list path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            synth_args.have_seed = seed_opt->count() > 0;
            return cmd_synth(synth_args);
        }
        if (verify->parsed()) {
            SuiteOptions opt;
            opt.max_qubits = verify_max_qubits;
            opt.seed = verify_seed;
            std::vector<std::string> names =
                verify_suite == "all" ? suite_names() : std::vector<std::string>{verify_suite};
            std::ostringstream lines;
            bool all_pass = true;
            for (const std::string& name : names) {
                for (const Verdict& v : run_suite(name, opt)) {
                    lines << v.to_json() << "\n";
                    std::cout << (v.pass ? "[pass] " : "[FAIL] ") << v.name << " measured "
                              << v.measured << " threshold " << v.threshold << "\n";
                    all_pass = all_pass && v.pass;
                }
            }
            if (!verify_out.empty()) write_file(verify_out, lines.str());
            return all_pass ? kExitOk : kExitVerificationFailure;
        }
        if (sweep->parsed()) {
            const auto [n_lo, n_hi] = parse_range(sweep_n);
            const auto [k_lo, k_hi] = parse_range(sweep_k);
            if (sweep_model == "qac0") {
                std::cout << "model\tn\tk\trounds\ttheta\tdepth\tancillae\tfidelity\n";
            } else {
                std::cout << "model\tn\tk\tM\tgamma\tgamma_tilde\tdepth\tancillae\tfidelity\n";
            }
            std::vector<int> depths;
            for (int k = k_lo; k <= k_hi; ++k) {
                depths.clear();
                for (int n = n_lo; n <= n_hi; ++n) {
                    if (k > n) continue;
                    std::ostringstream fidelity;
                    fidelity << "-";
                    if (sweep_model == "qac0") {
                        SynthesisConfig cfg;
                        cfg.max_qubits = std::max(sweep_max_qubits, 4096);
                        cfg.schedule =
                            sweep_schedule == "par" ? Schedule::Parallel : Schedule::Sequential;
                        const DickeSynthesis s = synth_dicke_qac0(n, k, cfg);
                        if (sweep_simulate &&
                            static_cast<int>(s.circuit.qubit_count) <= sweep_max_qubits) {
                            const StateVector st = run(s.circuit, sweep_max_qubits);
                            std::vector<QubitId> sys;
                            for (int j = 0; j < n; ++j) sys.push_back(j);
                            fidelity.str("");
                            fidelity << reduced_overlap(st, sys, dicke_state(n, k)).value;
                        }
                        depths.push_back(s.report.depth);
                        std::cout << "qac0\t" << n << "\t" << k << "\t" << s.angles.grover_rounds
                                  << "\t" << s.angles.theta << "\t" << s.report.depth << "\t"
                                  << s.report.ancilla_count << "\t" << fidelity.str() << "\n";
                    } else {
                        Qac0fConfig cfg;
                        cfg.max_qubits = std::max(sweep_max_qubits, 4096);
                        cfg.desk_gamma_floor = sweep_gamma_floor;
                        const int M = choose_M(n, k, MMode::Desk, sweep_gamma_floor);
                        const Qac0fSynthesis s = synth_dicke_qac0f(n, k, M, cfg);
                        if (sweep_simulate &&
                            static_cast<int>(s.circuit.qubit_count) <= sweep_max_qubits) {
                            const StateVector st = run(s.circuit, sweep_max_qubits);
                            fidelity.str("");
                            fidelity
                                << reduced_overlap(st, s.layout.output, dicke_state(n, k)).value;
                        }
                        depths.push_back(s.report.depth);
                        std::cout << "qac0f\t" << n << "\t" << k << "\t" << M << "\t"
                                  << s.tuning.gamma << "\t" << s.tuning.gamma_tilde << "\t"
                                  << s.report.depth << "\t" << s.report.ancilla_count << "\t"
                                  << fidelity.str() << "\n";
                    }
                }
                const bool flat = std::all_of(depths.begin(), depths.end(),
                                              [&](int d) { return d == depths[0]; });
                std::cout << "# depth flatness at k=" << k << ": "
                          << (flat ? "flat" : "varies with n") << "\n";
            }
            return kExitOk;
        }
        if (derand->parsed()) {
            const int t = choose_t(der_epsilon / 9.0);
            const GroverRounds rounds = grover_rounds(1);
            const AngleSolution sol = solve_theta(der_n, 1, rounds.c_target);
            const DerandomizedFamily best =
                derandomize_family(der_n, t, sol.theta, der_trials, der_seed);
            json j = json::parse(family_to_json(best.family));
            j["weighted_error"] = best.weighted_error;
            j["trials"] = best.trials;
            j["theta"] = sol.theta;
            j["config"] = config_json(json{{"n", der_n}, {"epsilon", der_epsilon},
                                           {"trials", der_trials}},
                                      der_seed);
            j["meta"] = meta_json();
            write_file(der_out, j.dump(2));
            std::cout << "wrote " << der_out << " (weighted error " << best.weighted_error
                      << ")\n";
            return kExitOk;
        }
        if (exp->parsed()) {
            const Circuit c = circuit_from_json(read_file(export_in));
            write_file(export_out, circuit_to_gatelist(expand_macros(c)));
            std::cout << "wrote " << export_out << "\n";
            return kExitOk;
        }
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResourceLimit;
    } catch (const ConfigMismatch& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    }
    return kExitConfigError;
}
