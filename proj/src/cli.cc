#include "qbound/cli.h"

#include "qbound/caps.h"
#include "qbound/cutting.h"
#include "qbound/errors.h"
#include "qbound/io.h"
#include "qbound/passes.h"
#include "qbound/phase_poly.h"
#include "qbound/simulator.h"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace qbound::cli {

namespace {

// Bad flag values or combinations that CLI11 cannot detect on its own.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Config {
    std::string command;
    std::string input;
    std::string second;
    std::string output;
    std::string report;
    std::string hints;
    std::string passes = "all";
    std::size_t max_rounds = 8;
    bool basis_inputs = false;
    // cut
    std::string kind;
    std::string wire;
    std::size_t after_gate = 0;
    std::size_t gate = 0;
    std::optional<double> theta;
    std::string a1;
    std::string a2;
    // simulate
    std::uint64_t input_index = 0;
    bool exact = false;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    // verify
    double tol = 1e-9;
    std::size_t states = 0;
    Caps caps;
};

std::string fixed12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string bits_of(Index i, std::size_t n) {
    std::string s;
    for (std::size_t j = 0; j < n; ++j) {
        s += bit_of(i, j) ? '1' : '0';
    }
    return s.empty() ? "-" : s;
}

std::string hex(Index v) {
    std::ostringstream os;
    os << "0x" << std::hex << v;
    return os.str();
}

Matrix pauli_by_name(const std::string& name) {
    if (name == "X" || name == "x") {
        return linalg::pauli_x();
    }
    if (name == "Y" || name == "y") {
        return linalg::pauli_y();
    }
    if (name == "Z" || name == "z") {
        return linalg::pauli_z();
    }
    throw UsageError("expected X, Y or Z, got '" + name + "'");
}

std::string matrix_to_pauli_name(const Matrix& m) {
    if (linalg::max_abs_diff(m, linalg::pauli_x()) < 1e-12) {
        return "X";
    }
    if (linalg::max_abs_diff(m, linalg::pauli_y()) < 1e-12) {
        return "Y";
    }
    if (linalg::max_abs_diff(m, linalg::pauli_z()) < 1e-12) {
        return "Z";
    }
    return "custom";
}

std::size_t parse_qubit_label(const std::string& s) {
    std::string digits = s;
    if (!digits.empty() && (digits[0] == 'q' || digits[0] == 'Q')) {
        digits = digits.substr(1);
    }
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(digits, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != digits.size() || v == 0) {
        throw UsageError("bad qubit label '" + s + "' (expected 1-based, e.g. q2 or 2)");
    }
    return v - 1;
}

std::vector<FactorHint> load_hints(const std::string& path) {
    const Json j = read_json_file(path);
    if (!j.is_array()) {
        throw InputError(path + ": expected an array of factor hints");
    }
    std::vector<FactorHint> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& h = j[i];
        const std::string where = path + ": hints[" + std::to_string(i) + "]";
        try {
            FactorHint hint;
            hint.name = h.value("name", "hint" + std::to_string(i + 1));
            hint.first_gate = h.at("first_gate").get<std::size_t>() - 1;
            hint.gate_count = h.at("gate_count").get<std::size_t>();
            for (std::size_t q : h.at("qubits").get<std::vector<std::size_t>>()) {
                hint.qubits.push_back(q - 1);
            }
            // Reuse the gate matrix parser through a MATRIX gate document.
            auto matrix_of = [&](const char* key) {
                Json doc = {{"width", hint.qubits.size()},
                            {"gates", Json::array({{{"kind", "MATRIX"}, {"operands", Json::array()}, {"matrix", h.at(key)}}})},
                            {"measurements", Json::array()}};
                for (std::size_t k = 0; k < hint.qubits.size(); ++k) {
                    doc["gates"][0]["operands"].push_back(k + 1);
                }
                return circuit_from_json(doc).gates[0].payload[0];
            };
            hint.v = matrix_of("v");
            hint.f = matrix_of("f");
            const std::string side = h.value("side", "measurement");
            if (side != "measurement" && side != "preparation") {
                throw InputError("side must be 'measurement' or 'preparation'");
            }
            hint.side = side == "measurement" ? Side::Measurement : Side::Preparation;
            out.push_back(std::move(hint));
        } catch (const Json::exception& e) {
            throw InputError(where + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
    }
    return out;
}

void print_distribution(std::ostream& out, const HybridProgram& p, const std::vector<double>& dist) {
    out << "# outputs: wires";
    for (std::size_t label : p.output_wires) {
        out << ' ' << label + 1;
    }
    out << " (bits listed in this order)\n";
    for (Index i = 0; i < dist.size(); ++i) {
        out << i << ' ' << bits_of(i, p.output_wires.size()) << ' ' << fixed12(dist[i]) << '\n';
    }
}

int cmd_simplify(const Config& cfg, std::ostream& out, std::ostream& err) {
    HybridProgram program = load_program_file(cfg.input);
    PipelineOptions opts;
    try {
        opts.passes = parse_pass_list(cfg.passes);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    opts.max_rounds = cfg.max_rounds;
    opts.basis_inputs = cfg.basis_inputs;
    opts.caps = cfg.caps;
    if (!cfg.hints.empty()) {
        opts.hints = load_hints(cfg.hints);
    }
    const PipelineResult result = simplify_program(std::move(program), opts);
    const std::string text = emit_json(program_to_json(result.program));
    if (cfg.output.empty()) {
        out << text;
    } else {
        write_text_file(cfg.output, text);
    }
    if (!cfg.report.empty()) {
        write_text_file(cfg.report, emit_json(pipeline_report_to_json(result)));
    }
    const Circuit& c = result.program.circuit;
    err << "simplify: " << result.rounds << " round(s), " << (result.fixed_point ? "fixed point" : "round limit")
        << "; " << c.gates.size() << " gates (" << c.count_multi_qubit_gates() << " multi-qubit), "
        << result.program.post_stages.size() << " post stage(s), premap "
        << (result.program.input_premap ? "yes" : "no") << '\n';
    for (const RewriteReport& r : result.reports) {
        if (r.gates_removed > 0 || r.stages_added > 0) {
            err << "  " << r.rule << ": " << r.gates_before << " -> " << r.gates_after << " gates\n";
        }
    }
    return kOk;
}

int cmd_cut(const Config& cfg, std::ostream& out, std::ostream& err) {
    const Circuit circuit = parse_circuit_file(cfg.input);
    CutResult cut;
    Json where;
    if (cfg.kind == "horizontal") {
        if (cfg.gate == 0) {
            throw UsageError("--gate (1-based) is required for a horizontal cut");
        }
        std::optional<ExponentialForm> form;
        if (cfg.theta) {
            if (cfg.a1.empty() || cfg.a2.empty()) {
                throw UsageError("--theta needs --a1 and --a2");
            }
            form = ExponentialForm{*cfg.theta, pauli_by_name(cfg.a1), pauli_by_name(cfg.a2)};
        }
        cut = cut_gate(circuit, cfg.gate - 1, form);
        where = {{"gate", cfg.gate},
                 {"theta", cut.form->theta},
                 {"a1", matrix_to_pauli_name(cut.form->a1)},
                 {"a2", matrix_to_pauli_name(cut.form->a2)}};
    } else if (cfg.kind == "vertical") {
        if (cfg.wire.empty()) {
            throw UsageError("--wire is required for a vertical cut");
        }
        const std::size_t q = parse_qubit_label(cfg.wire);
        cut = cut_wire(circuit, q, cfg.after_gate);
        where = {{"qubit", q + 1}, {"after_gate", cfg.after_gate}, {"fresh_qubit", circuit.width + 1}};
    } else {
        throw UsageError("--kind must be 'horizontal' or 'vertical'");
    }
    const std::filesystem::path dir(cfg.output);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw InputError("cannot create directory '" + cfg.output + "': " + ec.message());
    }
    Json terms = Json::array();
    for (std::size_t k = 0; k < cut.variants.size(); ++k) {
        const CutVariant& v = cut.variants[k];
        char name[32];
        std::snprintf(name, sizeof name, "variant_%02zu.json", k + 1);
        write_text_file((dir / name).string(), emit_json(circuit_to_json(v.circuit)));
        Json t = {{"index", k + 1},
                  {"coeff", v.coeff},
                  {"file", name},
                  {"roles", {std::string(role_name(cut.terms[k].roles[0])), std::string(role_name(cut.terms[k].roles[1]))}},
                  {"signed", v.signed_readout}};
        t["sign_wire"] = v.sign_wire ? Json(*v.sign_wire + 1) : Json(nullptr);
        terms.push_back(std::move(t));
    }
    Json manifest = {{"format", "cut-manifest"},
                     {"kind", cfg.kind},
                     {"location", where},
                     {"overhead", sampling_overhead(cut.terms)},
                     {"source_wires", circuit.num_wires()},
                     {"terms", terms}};
    write_text_file((dir / "manifest.json").string(), emit_json(manifest));
    out << "wrote " << cut.variants.size() << " variants and manifest.json to " << cfg.output << '\n';
    err << "cut: sampling overhead " << fixed12(sampling_overhead(cut.terms)) << '\n';
    return kOk;
}

int cmd_simulate(const Config& cfg, std::ostream& out, std::ostream&) {
    const HybridProgram p = load_program_file(cfg.input);
    const std::size_t n = p.circuit.width;
    if (n < 63 && cfg.input_index >= (Index{1} << n)) {
        throw InputError("--input " + std::to_string(cfg.input_index) + " exceeds 2^" + std::to_string(n) + " - 1");
    }
    const BasisState input(n, cfg.input_index);
    if (cfg.shots > 0) {
        const auto counts = sample_hybrid(p, input, cfg.shots, cfg.seed, cfg.caps);
        out << "# shots " << cfg.shots << ", seed " << cfg.seed << '\n';
        std::vector<double> freq(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            freq[i] = static_cast<double>(counts[i]) / static_cast<double>(cfg.shots);
        }
        out << "# outputs: wires";
        for (std::size_t label : p.output_wires) {
            out << ' ' << label + 1;
        }
        out << " (bits listed in this order)\n";
        for (Index i = 0; i < counts.size(); ++i) {
            out << i << ' ' << bits_of(i, p.output_wires.size()) << ' ' << counts[i] << ' ' << fixed12(freq[i]) << '\n';
        }
        return kOk;
    }
    print_distribution(out, p, run_hybrid_exact(p, input, cfg.caps));
    return kOk;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
    const HybridProgram a = load_program_file(cfg.input);
    const HybridProgram b = load_program_file(cfg.second);
    if (a.circuit.width != b.circuit.width) {
        throw InputError("programs have different widths (" + std::to_string(a.circuit.width) + " vs " +
                         std::to_string(b.circuit.width) + ")");
    }
    const std::size_t n = a.circuit.width;
    std::vector<BasisState> inputs;
    if (n <= 12) {
        for (Index i = 0; i < (Index{1} << n); ++i) {
            inputs.emplace_back(n, i);
        }
    } else {
        std::mt19937_64 rng(0x5eed);
        for (int i = 0; i < 4096; ++i) {
            inputs.emplace_back(n, rng() & ((Index{1} << n) - 1));
        }
    }
    const EquivalenceReport basis = equivalence_check(a, b, inputs, cfg.tol, cfg.caps);
    double worst = basis.max_deviation;
    bool passed = basis.passed;
    out << "basis inputs: " << inputs.size() << ", max deviation " << std::scientific << std::setprecision(3)
        << basis.max_deviation << '\n';
    if (cfg.states > 0) {
        std::vector<StateVector> states;
        for (std::size_t s = 0; s < cfg.states; ++s) {
            states.push_back(random_state(n, 1000 + s));
        }
        const EquivalenceReport st = equivalence_check(a, b, states, cfg.tol, cfg.caps);
        out << "random states: " << states.size() << ", max deviation " << st.max_deviation << '\n';
        worst = std::max(worst, st.max_deviation);
        passed = passed && st.passed;
    }
    out << "compared wires:";
    for (std::size_t w : basis.compared_wires) {
        out << ' ' << w + 1;
    }
    out << '\n' << (passed ? "PASS" : "FAIL") << " (tol " << cfg.tol << ")\n";
    if (!passed) {
        err << "verify: max deviation " << worst << " exceeds " << cfg.tol << '\n';
    }
    return passed ? kOk : kVerifyFailed;
}

void print_table(std::ostream& out, const PhasePolyRep& rep) {
    for (Index x = 0; x < rep.perm.size(); ++x) {
        out << "    " << hex(x) << " -> " << hex(rep.perm[x]) << "  p = " << fixed12(rep.phase[x]) << '\n';
    }
}

int cmd_info(const Config& cfg, std::ostream& out, std::ostream&) {
    const HybridProgram p = load_program_file(cfg.input);
    const Circuit& c = p.circuit;
    out << "width " << c.width << ", wires " << c.num_wires() << ", gates " << c.gates.size() << " ("
        << c.count_multi_qubit_gates() << " multi-qubit)\n";
    out << "preparations:";
    for (std::size_t q = 0; q < c.width; ++q) {
        const Prep pr = c.preparations[q];
        out << " q" << q + 1 << '=' << (pr == Prep::Free ? "free" : pr == Prep::Zero ? "0" : "1");
    }
    out << '\n';
    std::map<std::string, std::size_t> counts;
    for (const Gate& g : c.gates) {
        ++counts[std::string(kind_name(g.kind))];
    }
    out << "gate counts:";
    for (const auto& [k, v] : counts) {
        out << ' ' << k << '=' << v;
    }
    out << '\n';
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        out << "  " << i + 1 << ' ' << kind_name(g.kind);
        for (std::size_t q : g.qubits) {
            out << " q" << q + 1;
        }
        const auto rep = g.is_unitary_kind() ? gate_phase_poly(g) : std::nullopt;
        out << (rep ? "  [phase polynomial]" : "") << '\n';
        if (rep && g.qubits.size() <= 3) {
            print_table(out, *rep);
        }
    }
    std::vector<std::size_t> all(c.width);
    for (std::size_t q = 0; q < c.width; ++q) {
        all[q] = q;
    }
    const bool unitary_only =
        std::all_of(c.gates.begin(), c.gates.end(), [](const Gate& g) { return g.is_unitary_kind(); });
    if (unitary_only && c.width <= 8 && !c.gates.empty()) {
        const auto rep = segment_to_phase_poly(c.gates, all, cfg.caps);
        if (rep) {
            out << "whole gate list (p, f):\n";
            print_table(out, *rep);
        } else {
            out << "whole gate list: no phase polynomial representation\n";
        }
    }
    if (p.input_premap) {
        out << "input premap: " << (p.input_premap->kind() == StageKind::Deterministic ? "deterministic" : "stochastic")
            << " on " << p.input_premap->support().size() << " bit(s)\n";
    }
    for (std::size_t k = 0; k < p.post_stages.size(); ++k) {
        const ClassicalStage& s = p.post_stages[k];
        out << "post stage " << k + 1 << ": " << (s.kind() == StageKind::Deterministic ? "deterministic" : "stochastic")
            << " on " << s.support().size() << " bit(s)\n";
    }
    if (p.scale != 1.0) {
        out << "scale " << fixed12(p.scale) << '\n';
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    cfg.caps = Caps::from_environment();
    CLI::App app{"Boundary simplification, cutting and verification of quantum circuits"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.add_option("--sv-qubits", cfg.caps.statevector_qubits, "Statevector width cap");
    app.add_option("--dm-qubits", cfg.caps.density_qubits, "Density-matrix width cap");
    app.add_option("--table-qubits", cfg.caps.table_qubits, "Bit-table width cap");

    auto* simplify = app.add_subcommand("simplify", "Run boundary passes and write a hybrid program");
    simplify->add_option("input", cfg.input, "Circuit or hybrid program JSON")->required();
    simplify->add_option("-o,--output", cfg.output, "Output file (default: stdout)");
    simplify->add_option("--passes", cfg.passes,
                         "Comma-separated passes: trim-meas, trim-prep, fold-meas, fold-prep, factor, si-meas, "
                         "si-prep, trim, fold, si, all");
    simplify->add_option("--max-rounds", cfg.max_rounds, "Round-robin limit");
    simplify->add_option("--report", cfg.report, "Write the rewrite report JSON here");
    simplify->add_option("--hints", cfg.hints, "Factor hints JSON");
    simplify->add_flag("--basis-inputs", cfg.basis_inputs, "Free qubits only receive basis states");

    auto* cut = app.add_subcommand("cut", "Write quasi-probability cut variants and a manifest");
    cut->add_option("input", cfg.input, "Circuit JSON")->required();
    cut->add_option("--kind", cfg.kind, "horizontal or vertical")->required()->check(CLI::IsMember({"horizontal", "vertical"}));
    cut->add_option("--wire", cfg.wire, "Qubit to cut (vertical), e.g. q2");
    cut->add_option("--after-gate", cfg.after_gate, "Cut after this many gates (vertical)");
    cut->add_option("--gate", cfg.gate, "1-based index of the gate to cut (horizontal)");
    cut->add_option("--theta", cfg.theta, "Exponent angle of the cut gate");
    cut->add_option("--a1", cfg.a1, "Pauli on the first operand (X, Y, Z)");
    cut->add_option("--a2", cfg.a2, "Pauli on the second operand (X, Y, Z)");
    cut->add_option("-o,--output", cfg.output, "Output directory")->required();

    auto* simulate = app.add_subcommand("simulate", "Print the output distribution");
    simulate->add_option("file", cfg.input, "Circuit or hybrid program JSON")->required();
    simulate->add_option("--input", cfg.input_index, "Input basis index (qubit 1 = least significant bit)");
    auto* exact = simulate->add_flag("--exact", cfg.exact, "Exact distribution (default)");
    auto* shots = simulate->add_option("--shots", cfg.shots, "Sample this many shots")->check(CLI::PositiveNumber);
    exact->excludes(shots);
    simulate->add_option("--seed", cfg.seed, "Sampling seed");

    auto* verify = app.add_subcommand("verify", "Compare two programs on every basis input");
    verify->add_option("a", cfg.input, "First circuit or program")->required();
    verify->add_option("b", cfg.second, "Second circuit or program")->required();
    verify->add_option("--tol", cfg.tol, "Max-norm tolerance")->check(CLI::PositiveNumber);
    verify->add_option("--states", cfg.states, "Also compare on this many random pure states");

    auto* info = app.add_subcommand("info", "Print gate statistics and phase polynomial tables");
    info->add_option("input", cfg.input, "Circuit or hybrid program JSON")->required();

    std::vector<std::string> owned = args;
    std::vector<char*> argv;
    for (std::string& s : owned) {
        argv.push_back(s.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (simplify->parsed()) {
            return cmd_simplify(cfg, out, err);
        }
        if (cut->parsed()) {
            return cmd_cut(cfg, out, err);
        }
        if (simulate->parsed()) {
            return cmd_simulate(cfg, out, err);
        }
        if (verify->parsed()) {
            return cmd_verify(cfg, out, err);
        }
        if (info->parsed()) {
            return cmd_info(cfg, out, err);
        }
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kCap;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    }
    return kUsage;
}

}  // namespace qbound::cli
