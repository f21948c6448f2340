#pragma once

#include "qbound/passes.h"

#include <optional>
#include <string>
#include <vector>

namespace qbound::detail {

// Per-qubit constant initial value (fixed preparation, possibly rewritten by the premap).
std::vector<std::optional<int>> known_constant_bits(const Circuit& c, const ClassicalStage* premap, const Caps& caps);

// Fixed preparation, or free with basis inputs allowed.
bool basis_prepared(const Circuit& c, std::size_t q, const PassContext& ctx);

bool used_after(const Circuit& c, std::size_t q, std::size_t gate);
bool used_before(const Circuit& c, std::size_t q, std::size_t gate);
std::optional<std::size_t> next_use(const Circuit& c, std::size_t q, std::size_t gate);
std::optional<std::size_t> prev_use(const Circuit& c, std::size_t q, std::size_t gate);

Circuit without_gates(const Circuit& c, const std::vector<bool>& remove);

// Removes the measurements writing `wires` and renumbers the remaining wires
// (measurements and classically controlled gates) to stay contiguous.
Circuit drop_wires(const Circuit& c, const std::vector<std::size_t>& wires);

void finalize(PassResult& r, const Circuit& before, const std::string& rule);

// A gate read as "controls select a gate list on the other operands".
struct ControlSplit {
    std::vector<std::size_t> controls;
    std::vector<std::vector<Gate>> branches;
};
std::vector<ControlSplit> control_splits(const Gate& g);

// q enters g only as a control or through a diagonal action, so a diagonal gate on q commutes with g.
bool diagonal_on(const Gate& g, std::size_t q);

bool is_identity_up_to_phase(const Matrix& u, double tol = 1e-10);

// Non-RX single-qubit unitaries without a phase polynomial representation.
std::size_t count_coherent_single_qubit(const Circuit& c);

}  // namespace qbound::detail
