#pragma once

#include "qbound/circuit.h"

#include <cstdint>

namespace testgen {

struct RandomCircuitOptions {
    std::size_t max_width = 6;
    std::size_t max_depth = 30;
    // Probability that a qubit gets a fixed |0> or |1> preparation.
    double fixed_prep_rate = 0.5;
    // Probability that a gate is drawn from the incoherent subset only.
    double incoherent_bias = 0.6;
};

// Deterministic for a given seed. Every qubit is measured into the wire of the same index.
qbound::Circuit random_circuit(std::uint64_t seed, const RandomCircuitOptions& options = {});

}  // namespace testgen
