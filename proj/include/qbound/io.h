#pragma once

#include "qbound/circuit.h"
#include "qbound/cutting.h"
#include "qbound/passes.h"
#include "qbound/program.h"
#include "qbound/stage.h"

#include "json.hpp"

#include <string>

namespace qbound {

using Json = nlohmann::json;

// Interchange files use 1-based qubit and wire numbers, complex numbers as
// [re, im] pairs and row-major matrices. All parse failures throw InputError
// naming the offending field (for example "gates[2].operands").

Json circuit_to_json(const Circuit& circuit);
// Validates the result.
Circuit circuit_from_json(const Json& j);

Json stage_to_json(const ClassicalStage& stage);
ClassicalStage stage_from_json(const Json& j);

Json program_to_json(const HybridProgram& program);
// Accepts a hybrid program or a bare circuit.
HybridProgram program_from_json(const Json& j);

Json rewrite_report_to_json(const RewriteReport& report);
Json pipeline_report_to_json(const PipelineResult& result);

// Sorted keys, two-space indentation, doubles as %.17g. Emitting a parsed
// emission reproduces it byte for byte.
std::string emit_json(const Json& j);

// Syntax errors report line and column together with `source`.
Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Circuit parse_circuit_file(const std::string& path);
HybridProgram load_program_file(const std::string& path);
void emit_hybrid_program(const HybridProgram& program, const std::string& path);

}  // namespace qbound
