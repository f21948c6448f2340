#pragma once

#include "qbound/circuit.h"
#include "qbound/stage.h"

#include <optional>
#include <string>
#include <vector>

namespace qbound {

// Classical preprocessing, a circuit, and classical postprocessing.
//
// The input bitstring first has fixed preparations written into it, then goes
// through input_premap (width = circuit.width). The circuit runs on that basis
// state. Its measured-wire distribution passes through post_stages in order
// (each of width circuit.num_wires()), and the result is multiplied by scale.
struct HybridProgram {
    std::optional<ClassicalStage> input_premap;
    Circuit circuit;
    std::vector<ClassicalStage> post_stages;
    // Label of each output wire (original wire index before any wire was dropped).
    std::vector<std::size_t> output_wires;
    // Constant factor on the output, 1 except for cut variants with projector insertions.
    double scale = 1.0;

    static HybridProgram from_circuit(Circuit circuit);

    std::size_t num_outputs() const { return circuit.num_wires(); }
    // Throws InputError on inconsistent widths or an invalid circuit.
    void validate() const;
};

}  // namespace qbound
