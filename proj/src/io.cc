#include "qbound/io.h"

#include "qbound/errors.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qbound {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw InputError(path + ": " + msg); }

const Json& require(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path, std::string("missing field '") + key + "'");
    }
    return *it;
}

const Json* optional_field(const Json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

std::string at(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }
std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require_array(const Json& j, const std::string& path) {
    if (!j.is_array()) {
        fail(path, "expected an array");
    }
    return j;
}

double as_double(const Json& j, const std::string& path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    return j.get<double>();
}

long long as_int(const Json& j, const std::string& path) {
    if (j.is_number_integer() || j.is_number_unsigned()) {
        return j.get<long long>();
    }
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::floor(v) == v && std::abs(v) < 9.0e15) {
            return static_cast<long long>(v);
        }
    }
    fail(path, "expected an integer");
}

// 1-based in the file, 0-based in memory.
std::size_t as_position(const Json& j, const std::string& path) {
    const long long v = as_int(j, path);
    if (v < 1) {
        fail(path, "indices are 1-based, got " + std::to_string(v));
    }
    return static_cast<std::size_t>(v - 1);
}

std::vector<std::size_t> as_positions(const Json& j, const std::string& path) {
    require_array(j, path);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(as_position(j[i], idx(path, i)));
    }
    return out;
}

Json positions_to_json(const std::vector<std::size_t>& v) {
    Json out = Json::array();
    for (std::size_t x : v) {
        out.push_back(x + 1);
    }
    return out;
}

Complex as_complex(const Json& j, const std::string& path) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2) {
        fail(path, "expected a complex number [re, im]");
    }
    return {as_double(j[0], idx(path, 0)), as_double(j[1], idx(path, 1))};
}

Matrix as_matrix(const Json& j, const std::string& path) {
    require_array(j, path);
    if (j.empty()) {
        fail(path, "empty matrix");
    }
    const std::size_t cols = require_array(j[0], idx(path, 0)).size();
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const Json& row = require_array(j[r], idx(path, r));
        if (row.size() != cols) {
            fail(idx(path, r), "ragged matrix row");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_complex(row[c], idx(idx(path, r), c));
        }
    }
    return m;
}

RealMatrix as_real_matrix(const Json& j, const std::string& path) {
    require_array(j, path);
    if (j.empty()) {
        fail(path, "empty matrix");
    }
    const std::size_t cols = require_array(j[0], idx(path, 0)).size();
    RealMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const Json& row = require_array(j[r], idx(path, r));
        if (row.size() != cols) {
            fail(idx(path, r), "ragged matrix row");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_double(row[c], idx(idx(path, r), c));
        }
    }
    return m;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json real_matrix_to_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json gate_to_json(const Gate& g) {
    Json j;
    j["kind"] = std::string(kind_name(g.kind));
    if (g.kind != GateKind::ClassicallyControlled) {
        j["operands"] = positions_to_json(g.qubits);
    }
    switch (g.kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::Phase:
            j["params"] = Json::array({g.angle});
            break;
        case GateKind::CR:
            j["params"] = Json::array({g.order});
            break;
        case GateKind::Matrix:
            j["matrix"] = matrix_to_json(g.payload.at(0));
            break;
        case GateKind::ControlledBlock: {
            Json blocks = Json::array();
            for (const Matrix& m : g.payload) {
                blocks.push_back(matrix_to_json(m));
            }
            j["blocks"] = std::move(blocks);
            break;
        }
        case GateKind::ClassicallyControlled: {
            j["wires"] = positions_to_json(g.wires);
            Json branches = Json::array();
            for (const auto& br : g.branches) {
                Json list = Json::array();
                for (const Gate& inner : br) {
                    list.push_back(gate_to_json(inner));
                }
                branches.push_back(std::move(list));
            }
            j["branches"] = std::move(branches);
            break;
        }
        case GateKind::Operator: {
            Json ops = Json::array();
            for (const Matrix& m : g.payload) {
                ops.push_back(matrix_to_json(m));
            }
            j["operators"] = std::move(ops);
            if (!g.weights.empty()) {
                j["weights"] = g.weights;
            }
            break;
        }
        default:
            break;
    }
    return j;
}

Gate gate_from_json(const Json& j, const std::string& path) {
    const Json& kind_j = require(j, "kind", path);
    if (!kind_j.is_string()) {
        fail(at(path, "kind"), "expected a string");
    }
    const auto kind = kind_from_name(kind_j.get<std::string>());
    if (!kind) {
        fail(at(path, "kind"), "unknown gate kind '" + kind_j.get<std::string>() + "'");
    }
    if (*kind == GateKind::ClassicallyControlled) {
        const auto wires = as_positions(require(j, "wires", path), at(path, "wires"));
        const Json& br = require_array(require(j, "branches", path), at(path, "branches"));
        std::vector<std::vector<Gate>> branches;
        for (std::size_t b = 0; b < br.size(); ++b) {
            const std::string bpath = idx(at(path, "branches"), b);
            require_array(br[b], bpath);
            std::vector<Gate> list;
            for (std::size_t k = 0; k < br[b].size(); ++k) {
                list.push_back(gate_from_json(br[b][k], idx(bpath, k)));
            }
            branches.push_back(std::move(list));
        }
        try {
            return Gate::classically_controlled(wires, std::move(branches));
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
    }
    Gate g;
    g.kind = *kind;
    g.qubits = as_positions(require(j, "operands", path), at(path, "operands"));
    auto param = [&]() -> const Json& {
        const Json& p = require_array(require(j, "params", path), at(path, "params"));
        if (p.size() != 1) {
            fail(at(path, "params"), "expected exactly one parameter");
        }
        return p[0];
    };
    switch (g.kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::Phase:
            g.angle = as_double(param(), idx(at(path, "params"), 0));
            break;
        case GateKind::CR:
            g.order = static_cast<int>(as_int(param(), idx(at(path, "params"), 0)));
            break;
        case GateKind::Matrix:
            g.payload.push_back(as_matrix(require(j, "matrix", path), at(path, "matrix")));
            break;
        case GateKind::ControlledBlock: {
            const Json& blocks = require_array(require(j, "blocks", path), at(path, "blocks"));
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                g.payload.push_back(as_matrix(blocks[b], idx(at(path, "blocks"), b)));
            }
            break;
        }
        case GateKind::Operator: {
            const Json& ops = require_array(require(j, "operators", path), at(path, "operators"));
            for (std::size_t b = 0; b < ops.size(); ++b) {
                g.payload.push_back(as_matrix(ops[b], idx(at(path, "operators"), b)));
            }
            if (const Json* w = optional_field(j, "weights")) {
                require_array(*w, at(path, "weights"));
                for (std::size_t b = 0; b < w->size(); ++b) {
                    g.weights.push_back(as_double((*w)[b], idx(at(path, "weights"), b)));
                }
            }
            break;
        }
        default:
            break;
    }
    return g;
}

void emit_value(const Json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += pad + "  " + Json(key).dump() + ": ";
                emit_value(value, indent + 2, out);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    out += i ? ", " : "";
                    emit_value(j[i], indent, out);
                }
                out += "]";
                return;
            }
            // Arrays of short numeric rows stay on one line per row.
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out += pad + "  ";
                emit_value(j[i], indent + 2, out);
                out += i + 1 < j.size() ? ",\n" : "\n";
            }
            out += pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                throw std::invalid_argument("cannot emit a non-finite number");
            }
            if (v == 0.0) {
                v = 0.0;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

Json circuit_to_json(const Circuit& c) {
    Json j;
    j["format"] = "circuit";
    j["width"] = c.width;
    Json preps = Json::array();
    for (Prep p : c.preparations) {
        preps.push_back(p == Prep::Free ? Json(nullptr) : Json(p == Prep::One ? 1 : 0));
    }
    j["preparations"] = std::move(preps);
    Json gates = Json::array();
    for (const Gate& g : c.gates) {
        gates.push_back(gate_to_json(g));
    }
    j["gates"] = std::move(gates);
    Json meas = Json::array();
    for (const Measurement& m : c.measurements) {
        meas.push_back(Json::array({m.qubit + 1, m.wire + 1}));
    }
    j["measurements"] = std::move(meas);
    return j;
}

Circuit circuit_from_json(const Json& j) {
    const std::string path = "circuit";
    const long long width = as_int(require(j, "width", path), at(path, "width"));
    if (width < 0 || width > 62) {
        fail(at(path, "width"), "width must lie in [0, 62]");
    }
    Circuit c(static_cast<std::size_t>(width));
    if (const Json* preps = optional_field(j, "preparations")) {
        require_array(*preps, at(path, "preparations"));
        if (preps->size() != c.width) {
            fail(at(path, "preparations"), "expected " + std::to_string(c.width) + " entries");
        }
        for (std::size_t q = 0; q < c.width; ++q) {
            const Json& p = (*preps)[q];
            if (p.is_null()) {
                continue;
            }
            const long long v = as_int(p, idx(at(path, "preparations"), q));
            if (v != 0 && v != 1) {
                fail(idx(at(path, "preparations"), q), "expected null, 0 or 1");
            }
            c.preparations[q] = v ? Prep::One : Prep::Zero;
        }
    }
    const Json& gates = require_array(require(j, "gates", path), at(path, "gates"));
    for (std::size_t i = 0; i < gates.size(); ++i) {
        c.gates.push_back(gate_from_json(gates[i], "gates[" + std::to_string(i) + "]"));
    }
    const Json& meas = require_array(require(j, "measurements", path), at(path, "measurements"));
    for (std::size_t i = 0; i < meas.size(); ++i) {
        const std::string mpath = "measurements[" + std::to_string(i) + "]";
        if (!meas[i].is_array() || meas[i].size() != 2) {
            fail(mpath, "expected [qubit, wire]");
        }
        c.measurements.push_back({as_position(meas[i][0], mpath + "[0]"), as_position(meas[i][1], mpath + "[1]")});
    }
    const auto violations = validate_circuit(c);
    if (!violations.empty()) {
        std::string msg = "invalid circuit:";
        for (const Violation& v : violations) {
            msg += "\n  " + v.to_string();
        }
        throw InputError(msg);
    }
    return c;
}

Json stage_to_json(const ClassicalStage& s) {
    Json j;
    j["width"] = s.width();
    j["support"] = positions_to_json(s.support());
    if (s.kind() == StageKind::Deterministic) {
        j["kind"] = "deterministic";
        j["table"] = s.local_table();
    } else {
        j["kind"] = "stochastic";
        j["matrix"] = real_matrix_to_json(s.local_matrix());
    }
    return j;
}

ClassicalStage stage_from_json(const Json& j) {
    const std::string path = "stage";
    const Json& kind = require(j, "kind", path);
    const long long width = as_int(require(j, "width", path), at(path, "width"));
    if (width < 0 || width > 62) {
        fail(at(path, "width"), "width must lie in [0, 62]");
    }
    const auto support = as_positions(require(j, "support", path), at(path, "support"));
    try {
        if (kind == "deterministic") {
            const Json& t = require_array(require(j, "table", path), at(path, "table"));
            std::vector<Index> table;
            for (std::size_t i = 0; i < t.size(); ++i) {
                const long long v = as_int(t[i], idx(at(path, "table"), i));
                if (v < 0) {
                    fail(idx(at(path, "table"), i), "negative table entry");
                }
                table.push_back(static_cast<Index>(v));
            }
            return ClassicalStage::deterministic_on(static_cast<std::size_t>(width), support, std::move(table));
        }
        if (kind == "stochastic") {
            return ClassicalStage::stochastic_on(static_cast<std::size_t>(width), support,
                                                 as_real_matrix(require(j, "matrix", path), at(path, "matrix")),
                                                 1e-10);
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(at(path, "kind"), "expected 'deterministic' or 'stochastic'");
}

Json program_to_json(const HybridProgram& p) {
    Json j;
    j["format"] = "hybrid-program";
    j["circuit"] = circuit_to_json(p.circuit);
    j["input_premap"] = p.input_premap ? stage_to_json(*p.input_premap) : Json(nullptr);
    Json stages = Json::array();
    for (const ClassicalStage& s : p.post_stages) {
        stages.push_back(stage_to_json(s));
    }
    j["post_stages"] = std::move(stages);
    j["output_wires"] = positions_to_json(p.output_wires);
    j["scale"] = p.scale;
    return j;
}

HybridProgram program_from_json(const Json& j) {
    if (!j.is_object()) {
        fail("document", "expected an object");
    }
    const Json* format = optional_field(j, "format");
    if (!format || *format == "circuit") {
        return HybridProgram::from_circuit(circuit_from_json(j));
    }
    if (*format != "hybrid-program") {
        fail("format", "expected 'circuit' or 'hybrid-program'");
    }
    HybridProgram p;
    p.circuit = circuit_from_json(require(j, "circuit", ""));
    if (const Json* pre = optional_field(j, "input_premap")) {
        p.input_premap = stage_from_json(*pre);
    }
    if (const Json* stages = optional_field(j, "post_stages")) {
        require_array(*stages, "post_stages");
        for (const Json& s : *stages) {
            p.post_stages.push_back(stage_from_json(s));
        }
    }
    if (const Json* labels = optional_field(j, "output_wires")) {
        p.output_wires = as_positions(*labels, "output_wires");
    } else {
        p = [&] {
            HybridProgram q = HybridProgram::from_circuit(p.circuit);
            q.input_premap = p.input_premap;
            q.post_stages = p.post_stages;
            return q;
        }();
    }
    if (const Json* scale = optional_field(j, "scale")) {
        p.scale = as_double(*scale, "scale");
    }
    p.validate();
    return p;
}

Json rewrite_report_to_json(const RewriteReport& r) {
    Json j;
    j["rule"] = r.rule;
    j["gates_before"] = r.gates_before;
    j["gates_after"] = r.gates_after;
    j["gates_removed"] = r.gates_removed;
    j["stages_added"] = r.stages_added;
    j["multi_qubit_after"] = r.multi_qubit_after;
    j["notes"] = r.notes;
    if (!r.discarded_phases.empty()) {
        j["discarded_phases"] = r.discarded_phases;
    }
    if (r.system_matrix) {
        j["system_matrix"] = real_matrix_to_json(*r.system_matrix);
    }
    if (r.outcome_probabilities) {
        j["outcome_probabilities"] = real_matrix_to_json(*r.outcome_probabilities);
    }
    return j;
}

Json pipeline_report_to_json(const PipelineResult& result) {
    Json j;
    j["format"] = "simplify-report";
    j["rounds"] = result.rounds;
    j["fixed_point"] = result.fixed_point;
    Json steps = Json::array();
    for (const RewriteReport& r : result.reports) {
        steps.push_back(rewrite_report_to_json(r));
    }
    j["steps"] = std::move(steps);
    const Circuit& c = result.program.circuit;
    j["final"] = {{"gates", c.gates.size()},
                  {"multi_qubit_gates", c.count_multi_qubit_gates()},
                  {"post_stages", result.program.post_stages.size()},
                  {"has_premap", result.program.input_premap.has_value()},
                  {"scale", result.program.scale}};
    return j;
}

std::string emit_json(const Json& j) {
    std::string out;
    emit_value(j, 0, out);
    out += "\n";
    return out;
}

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(source + ": " + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw InputError("failed writing '" + path + "'");
    }
}

Circuit parse_circuit_file(const std::string& path) {
    const Json j = read_json_file(path);
    try {
        return circuit_from_json(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

HybridProgram load_program_file(const std::string& path) {
    const Json j = read_json_file(path);
    try {
        return program_from_json(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void emit_hybrid_program(const HybridProgram& program, const std::string& path) {
    write_text_file(path, emit_json(program_to_json(program)));
}

}  // namespace qbound
