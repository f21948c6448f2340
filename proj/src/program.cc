#include "qbound/program.h"

#include "qbound/errors.h"

#include <algorithm>
#include <numeric>

namespace qbound {

HybridProgram HybridProgram::from_circuit(Circuit circuit) {
    HybridProgram p;
    p.output_wires.resize(circuit.num_wires());
    std::iota(p.output_wires.begin(), p.output_wires.end(), std::size_t{0});
    p.circuit = std::move(circuit);
    return p;
}

void HybridProgram::validate() const {
    const auto violations = validate_circuit(circuit);
    if (!violations.empty()) {
        throw InputError("invalid circuit: " + violations.front().to_string());
    }
    if (input_premap && input_premap->width() != circuit.width) {
        throw InputError("input premap width " + std::to_string(input_premap->width()) + " != circuit width " +
                         std::to_string(circuit.width));
    }
    for (std::size_t i = 0; i < post_stages.size(); ++i) {
        if (post_stages[i].width() != circuit.num_wires()) {
            throw InputError("post stage " + std::to_string(i) + " has width " +
                             std::to_string(post_stages[i].width()) + ", expected " +
                             std::to_string(circuit.num_wires()));
        }
    }
    if (output_wires.size() != circuit.num_wires()) {
        throw InputError("output_wires must list one label per measured wire");
    }
    std::vector<std::size_t> sorted = output_wires;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InputError("duplicate output wire label");
    }
    if (!(scale == scale) || scale == 0.0) {
        throw InputError("scale must be a nonzero number");
    }
}

}  // namespace qbound
