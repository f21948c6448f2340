#include "qbound/passes.h"

#include <algorithm>
#include <stdexcept>

namespace qbound {

namespace {

struct PassEntry {
    PassId id;
    std::string_view name;
};

constexpr PassEntry kPasses[] = {
    {PassId::TrimMeasurement, "trim-meas"}, {PassId::TrimPreparation, "trim-prep"},
    {PassId::FoldMeasurement, "fold-meas"}, {PassId::FoldPreparation, "fold-prep"},
    {PassId::Factor, "factor"},             {PassId::SiMeasurement, "si-meas"},
    {PassId::SiPreparation, "si-prep"},
};

std::string_view trim_spaces(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::string_view pass_name(PassId id) {
    for (const PassEntry& e : kPasses) {
        if (e.id == id) {
            return e.name;
        }
    }
    return "unknown";
}

std::vector<PassId> parse_pass_list(std::string_view csv) {
    std::vector<PassId> out;
    while (true) {
        const auto comma = csv.find(',');
        const std::string_view tok = trim_spaces(csv.substr(0, comma));
        if (tok == "trim") {
            out.insert(out.end(), {PassId::TrimMeasurement, PassId::TrimPreparation});
        } else if (tok == "fold") {
            out.insert(out.end(), {PassId::FoldMeasurement, PassId::FoldPreparation});
        } else if (tok == "si") {
            out.insert(out.end(), {PassId::SiMeasurement, PassId::SiPreparation});
        } else if (tok == "all") {
            out.insert(out.end(), {PassId::SiMeasurement, PassId::SiPreparation, PassId::TrimMeasurement,
                                   PassId::TrimPreparation, PassId::Factor, PassId::FoldMeasurement,
                                   PassId::FoldPreparation});
        } else {
            const auto it = std::find_if(std::begin(kPasses), std::end(kPasses),
                                         [&](const PassEntry& e) { return e.name == tok; });
            if (it == std::end(kPasses)) {
                throw std::invalid_argument("unknown pass '" + std::string(tok) + "'");
            }
            out.push_back(it->id);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        csv.remove_prefix(comma + 1);
    }
    return out;
}

PassResult run_pass(PassId id, const Circuit& c, const PassContext& ctx) {
    switch (id) {
        case PassId::TrimMeasurement:
            return trim_measurement_boundary(c, ctx);
        case PassId::TrimPreparation:
            return trim_preparation_boundary(c, ctx);
        case PassId::FoldMeasurement:
            return fold_control_measurement(c, ctx);
        case PassId::FoldPreparation:
            return fold_control_preparation(c, ctx);
        case PassId::Factor:
            return factor_and_trim(c, ctx);
        case PassId::SiMeasurement:
            return si_fold_measurement(c, ctx);
        case PassId::SiPreparation:
            return si_fold_preparation(c, ctx);
    }
    throw std::invalid_argument("unknown pass id");
}

bool absorb_pass_result(HybridProgram& program, const PassResult& result, const Caps& caps) {
    HybridProgram next = program;
    if (!result.dropped_wires.empty()) {
        for (ClassicalStage& s : next.post_stages) {
            auto reduced = drop_bits(s, result.dropped_wires);
            if (!reduced) {
                return false;
            }
            s = std::move(*reduced);
        }
        std::vector<std::size_t> labels;
        for (std::size_t w = 0; w < next.output_wires.size(); ++w) {
            if (std::find(result.dropped_wires.begin(), result.dropped_wires.end(), w) == result.dropped_wires.end()) {
                labels.push_back(next.output_wires[w]);
            }
        }
        next.output_wires = std::move(labels);
    }
    next.circuit = result.circuit;
    if (result.post_stage) {
        next.post_stages.insert(next.post_stages.begin(), *result.post_stage);
    }
    if (result.premap) {
        next.input_premap =
            next.input_premap ? compose_stages(*next.input_premap, *result.premap, caps) : *result.premap;
    }
    next.scale *= result.scale;
    program = std::move(next);
    return true;
}

PipelineResult simplify_program(HybridProgram program, const PipelineOptions& options) {
    program.validate();
    PipelineResult out;
    auto context = [&](const HybridProgram& p) {
        PassContext ctx;
        ctx.premap = p.input_premap ? &*p.input_premap : nullptr;
        ctx.basis_inputs = options.basis_inputs;
        ctx.caps = options.caps;
        return ctx;
    };
    if (!options.hints.empty()) {
        PassContext ctx = context(program);
        ctx.hints = options.hints;
        const PassResult r = factor_and_trim(program.circuit, ctx);
        if (!absorb_pass_result(program, r, options.caps)) {
            throw std::logic_error("factor hints could not be absorbed");
        }
        out.reports.push_back(r.report);
    }
    for (std::size_t round = 1; round <= options.max_rounds; ++round) {
        bool any = false;
        for (PassId id : options.passes) {
            const PassResult r = run_pass(id, program.circuit, context(program));
            if (r.changed && absorb_pass_result(program, r, options.caps)) {
                any = true;
            }
            out.reports.push_back(r.report);
        }
        out.rounds = round;
        if (!any) {
            out.fixed_point = true;
            break;
        }
    }
    if (options.max_rounds == 0) {
        out.fixed_point = options.passes.empty();
    }
    out.program = std::move(program);
    return out;
}

PipelineResult simplify_pipeline(const Circuit& circuit, const PipelineOptions& options) {
    return simplify_program(HybridProgram::from_circuit(circuit), options);
}

}  // namespace qbound
