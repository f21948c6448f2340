#include "pass_internal.h"

#include "qbound/phase_poly.h"

#include <algorithm>
#include <set>

namespace qbound {

using namespace detail;

namespace {

std::vector<std::size_t> support_of(const Circuit& c, const std::vector<bool>& include) {
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (include[i]) {
            s.insert(c.gates[i].qubits.begin(), c.gates[i].qubits.end());
        }
    }
    return {s.begin(), s.end()};
}

std::vector<Gate> selected(const Circuit& c, const std::vector<bool>& include) {
    std::vector<Gate> out;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (include[i]) {
            out.push_back(c.gates[i]);
        }
    }
    return out;
}

bool representable(const Gate& g) { return g.is_unitary_kind() && gate_phase_poly(g).has_value(); }

}  // namespace

PassResult trim_measurement_boundary(const Circuit& c, const PassContext& ctx) {
    PassResult r;
    r.circuit = c;
    std::vector<bool> blocked(c.width, false);
    std::vector<bool> include(c.gates.size(), false);
    bool any = false;
    for (std::size_t i = c.gates.size(); i-- > 0;) {
        const Gate& g = c.gates[i];
        bool ok = !g.qubits.empty();
        for (std::size_t q : g.qubits) {
            ok = ok && c.is_measured(q) && !blocked[q];
        }
        if (ok && representable(g)) {
            include[i] = true;
            any = true;
            continue;
        }
        for (std::size_t q : g.qubits) {
            blocked[q] = true;
        }
        for (std::size_t w : g.wires) {
            if (const auto q = c.qubit_of_wire(w)) {
                blocked[*q] = true;
            }
        }
    }
    if (!any) {
        finalize(r, c, "trim-measurement");
        r.report.notes.push_back("no incoherent gate run before the measurements");
        return r;
    }
    const auto support = support_of(c, include);
    const auto gates = selected(c, include);
    const auto rep = segment_to_phase_poly(gates, support, ctx.caps);
    std::vector<std::size_t> wires;
    for (std::size_t q : support) {
        wires.push_back(*c.wire_of(q));
    }
    r.post_stage = ClassicalStage::deterministic_on(c.num_wires(), wires, rep->perm);
    if (support.size() <= 10) {
        r.report.discarded_phases = rep->phase;
    }
    r.circuit = without_gates(c, include);
    r.changed = true;
    finalize(r, c, "trim-measurement");
    r.report.notes.push_back("moved " + std::to_string(gates.size()) + " gates on " +
                             std::to_string(support.size()) + " qubits into postprocessing");
    return r;
}

PassResult trim_preparation_boundary(const Circuit& c, const PassContext& ctx) {
    PassResult r;
    r.circuit = c;
    std::vector<bool> blocked(c.width, false);
    std::vector<bool> include(c.gates.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        bool ok = !g.qubits.empty();
        for (std::size_t q : g.qubits) {
            ok = ok && basis_prepared(c, q, ctx) && !blocked[q];
        }
        if (ok && representable(g)) {
            include[i] = true;
            any = true;
            continue;
        }
        for (std::size_t q : g.qubits) {
            blocked[q] = true;
        }
    }
    if (!any) {
        finalize(r, c, "trim-preparation");
        r.report.notes.push_back("no incoherent gate run after the preparations");
        return r;
    }
    const auto support = support_of(c, include);
    const auto gates = selected(c, include);
    const auto rep = segment_to_phase_poly(gates, support, ctx.caps);
    r.circuit = without_gates(c, include);
    r.changed = true;

    bool constant = true;
    for (std::size_t q : support) {
        constant = constant && c.preparations[q] != Prep::Free;
        if (ctx.premap != nullptr) {
            const auto& ps = ctx.premap->support();
            constant = constant && std::find(ps.begin(), ps.end(), q) == ps.end();
        }
    }
    if (constant) {
        // Fixed inputs: rewrite the preparations directly.
        Index local = 0;
        for (std::size_t j = 0; j < support.size(); ++j) {
            local |= static_cast<Index>(c.preparations[support[j]] == Prep::One ? 1 : 0) << j;
        }
        const Index out = rep->perm[local];
        for (std::size_t j = 0; j < support.size(); ++j) {
            r.circuit.preparations[support[j]] = bit_of(out, j) ? Prep::One : Prep::Zero;
        }
        r.report.notes.push_back("rewrote fixed preparations of " + std::to_string(support.size()) + " qubits");
    } else {
        r.premap = ClassicalStage::deterministic_on(c.width, support, rep->perm);
        r.report.notes.push_back("moved " + std::to_string(gates.size()) + " gates on " +
                                 std::to_string(support.size()) + " qubits into preprocessing");
    }
    if (support.size() <= 10) {
        r.report.discarded_phases = rep->phase;
    }
    finalize(r, c, "trim-preparation");
    return r;
}

}  // namespace qbound
