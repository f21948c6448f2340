#pragma once

#include "qbound/caps.h"
#include "qbound/circuit.h"
#include "qbound/program.h"
#include "qbound/stage.h"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qbound {

enum class Side { Measurement, Preparation };

// User-supplied factorization of the gate block [first_gate, first_gate + gate_count)
// acting on `qubits`. Measurement side: the block equals V followed by F.
// Preparation side: the block equals F followed by V. F must be incoherent.
struct FactorHint {
    std::string name;
    std::size_t first_gate = 0;
    std::size_t gate_count = 0;
    std::vector<std::size_t> qubits;
    Matrix v;
    Matrix f;
    Side side = Side::Measurement;
};

struct RewriteReport {
    std::string rule;
    std::size_t gates_before = 0;
    std::size_t gates_after = 0;
    std::size_t gates_removed = 0;
    std::size_t stages_added = 0;
    std::size_t multi_qubit_after = 0;
    std::vector<std::string> notes;
    // Phase table dropped by a trim, indexed like the stage support (omitted above 10 bits).
    std::vector<double> discarded_phases;
    // SI folds: the system matrix M and P(μ|x) (rows μ, columns x).
    std::optional<RealMatrix> system_matrix;
    std::optional<RealMatrix> outcome_probabilities;
};

struct PassContext {
    // Current input premap of the enclosing program, used to find constant qubits.
    const ClassicalStage* premap = nullptr;
    // Free qubits receive computational basis states (not superpositions).
    bool basis_inputs = false;
    Caps caps;
    std::vector<FactorHint> hints;
};

struct PassResult {
    Circuit circuit;
    // Applied after the existing premap.
    std::optional<ClassicalStage> premap;
    // Applied before the existing post stages, over the new circuit's wires.
    std::optional<ClassicalStage> post_stage;
    // Wires (pre-pass numbering) removed from the output.
    std::vector<std::size_t> dropped_wires;
    double scale = 1.0;
    bool changed = false;
    RewriteReport report;
};

PassResult trim_measurement_boundary(const Circuit& circuit, const PassContext& ctx = {});
PassResult trim_preparation_boundary(const Circuit& circuit, const PassContext& ctx = {});
PassResult fold_control_measurement(const Circuit& circuit, const PassContext& ctx = {});
PassResult fold_control_preparation(const Circuit& circuit, const PassContext& ctx = {});
// Throws std::invalid_argument when a hint's factors do not multiply to the block (tol 1e-10).
PassResult factor_and_trim(const Circuit& circuit, const PassContext& ctx = {});
PassResult si_fold_measurement(const Circuit& circuit, const PassContext& ctx = {});
PassResult si_fold_preparation(const Circuit& circuit, const PassContext& ctx = {});

enum class PassId {
    TrimMeasurement,
    TrimPreparation,
    FoldMeasurement,
    FoldPreparation,
    Factor,
    SiMeasurement,
    SiPreparation,
};

std::string_view pass_name(PassId id);
// Comma-separated names. "trim", "fold" and "si" expand to both sides.
// Throws std::invalid_argument for unknown names.
std::vector<PassId> parse_pass_list(std::string_view csv);
PassResult run_pass(PassId id, const Circuit& circuit, const PassContext& ctx);

struct PipelineOptions {
    std::vector<PassId> passes;
    std::size_t max_rounds = 8;
    bool basis_inputs = false;
    Caps caps;
    std::vector<FactorHint> hints;
};

struct PipelineResult {
    HybridProgram program;
    std::vector<RewriteReport> reports;
    std::size_t rounds = 0;
    bool fixed_point = false;
};

PipelineResult simplify_pipeline(const Circuit& circuit, const PipelineOptions& options);
PipelineResult simplify_program(HybridProgram program, const PipelineOptions& options);

// Folds one pass result into a program. Returns false (program untouched) when an
// existing post stage cannot lose the dropped wires.
bool absorb_pass_result(HybridProgram& program, const PassResult& result, const Caps& caps = {});

// Decomposition U = e^{iφ} rz(a)·rx(b)·rz(c) (rz(c) acts first).
struct ZxzAngles {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};
ZxzAngles zxz_decompose(const Matrix& u);

}  // namespace qbound
