#include "pass_internal.h"

namespace qbound {

using namespace detail;

PassResult fold_control_measurement(const Circuit& c, const PassContext&) {
    PassResult r;
    r.circuit = c;
    Circuit& cur = r.circuit;
    std::size_t folded = 0;
    std::size_t dropped = 0;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = cur.gates.size(); i-- > 0;) {
            for (const ControlSplit& split : control_splits(cur.gates[i])) {
                bool ok = true;
                std::vector<std::size_t> wires;
                for (std::size_t q : split.controls) {
                    const auto w = cur.wire_of(q);
                    ok = ok && w && !used_after(cur, q, i);
                    if (w) {
                        wires.push_back(*w);
                    }
                }
                if (!ok) {
                    continue;
                }
                Gate cc = Gate::classically_controlled(std::move(wires), split.branches);
                if (cc.qubits.empty()) {
                    cur.gates.erase(cur.gates.begin() + static_cast<std::ptrdiff_t>(i));
                    ++dropped;
                } else {
                    cur.gates[i] = std::move(cc);
                    ++folded;
                }
                progress = true;
                break;
            }
        }
    }
    r.changed = folded + dropped > 0;
    finalize(r, c, "fold-control-measurement");
    r.report.notes.push_back("classically controlled: " + std::to_string(folded) + ", removed: " +
                             std::to_string(dropped));
    return r;
}

PassResult fold_control_preparation(const Circuit& c, const PassContext& ctx) {
    PassResult r;
    r.circuit = c;
    Circuit& cur = r.circuit;
    const auto known = known_constant_bits(c, ctx.premap, ctx.caps);
    auto fixed_here = [&](std::size_t q, std::size_t i) { return known[q].has_value() && !used_before(cur, q, i); };

    std::size_t replaced = 0;
    std::size_t removed = 0;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < cur.gates.size() && !progress; ++i) {
            const Gate g = cur.gates[i];
            std::optional<std::vector<Gate>> rewrite;
            for (const ControlSplit& split : control_splits(g)) {
                bool ok = true;
                Index v = 0;
                for (std::size_t j = 0; j < split.controls.size(); ++j) {
                    const std::size_t q = split.controls[j];
                    ok = ok && fixed_here(q, i);
                    if (ok) {
                        v |= static_cast<Index>(*known[q]) << j;
                    }
                }
                if (ok) {
                    rewrite = split.branches[v];
                    break;
                }
            }
            if (!rewrite && g.kind == GateKind::Toffoli) {
                // One constant control leaves a CX or nothing.
                for (int k = 0; k < 2 && !rewrite; ++k) {
                    const std::size_t q = g.qubits[static_cast<std::size_t>(k)];
                    if (fixed_here(q, i)) {
                        if (*known[q] == 0) {
                            rewrite = std::vector<Gate>{};
                        } else {
                            rewrite = std::vector<Gate>{Gate::cx(g.qubits[static_cast<std::size_t>(1 - k)], g.qubits[2])};
                        }
                    }
                }
            }
            if (!rewrite) {
                continue;
            }
            cur.gates.erase(cur.gates.begin() + static_cast<std::ptrdiff_t>(i));
            cur.gates.insert(cur.gates.begin() + static_cast<std::ptrdiff_t>(i), rewrite->begin(), rewrite->end());
            (rewrite->empty() ? removed : replaced) += 1;
            progress = true;
        }
    }
    r.changed = replaced + removed > 0;
    finalize(r, c, "fold-control-preparation");
    r.report.notes.push_back("replaced by target unitary: " + std::to_string(replaced) +
                             ", removed: " + std::to_string(removed));
    return r;
}

}  // namespace qbound
