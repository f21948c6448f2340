#include "pass_internal.h"

#include "qbound/errors.h"
#include "qbound/phase_poly.h"
#include "qbound/simulator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace qbound {

using namespace detail;

namespace {

constexpr double kLeakTol = 1e-10;

struct Group {
    std::vector<std::size_t> cc;  // gate indices, ascending
    std::vector<std::size_t> e;   // gate indices, ascending
    std::vector<std::size_t> anc;
    std::vector<std::size_t> sys;
};

std::set<std::size_t> branch_qubits(const Gate& g) { return {g.qubits.begin(), g.qubits.end()}; }

std::set<std::size_t> wire_qubits(const Circuit& c, const Gate& g) {
    std::set<std::size_t> out;
    for (std::size_t w : g.wires) {
        if (const auto q = c.qubit_of_wire(w)) {
            out.insert(*q);
        }
    }
    return out;
}

bool intersects(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
    return std::any_of(a.begin(), a.end(), [&](std::size_t x) { return b.count(x) > 0; });
}

std::vector<Group> find_groups(const Circuit& c) {
    std::vector<std::size_t> ccs;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (c.gates[i].kind == GateKind::ClassicallyControlled) {
            ccs.push_back(i);
        }
    }
    std::vector<std::size_t> parent(ccs.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (std::size_t a = 0; a < ccs.size(); ++a) {
        for (std::size_t b = a + 1; b < ccs.size(); ++b) {
            const Gate& ga = c.gates[ccs[a]];
            const Gate& gb = c.gates[ccs[b]];
            if (intersects(wire_qubits(c, ga), wire_qubits(c, gb)) ||
                intersects(branch_qubits(ga), branch_qubits(gb))) {
                parent[find(a)] = find(b);
            }
        }
    }
    std::vector<Group> groups;
    std::vector<std::size_t> slot(ccs.size(), SIZE_MAX);
    for (std::size_t a = 0; a < ccs.size(); ++a) {
        const std::size_t root = find(a);
        if (slot[root] == SIZE_MAX) {
            slot[root] = groups.size();
            groups.emplace_back();
        }
        groups[slot[root]].cc.push_back(ccs[a]);
    }
    for (Group& g : groups) {
        std::set<std::size_t> anc;
        std::set<std::size_t> sys;
        for (std::size_t i : g.cc) {
            const auto w = wire_qubits(c, c.gates[i]);
            anc.insert(w.begin(), w.end());
            const auto b = branch_qubits(c.gates[i]);
            sys.insert(b.begin(), b.end());
        }
        for (std::size_t i = 0; i < c.gates.size(); ++i) {
            const Gate& gate = c.gates[i];
            if (gate.kind == GateKind::ClassicallyControlled) {
                continue;
            }
            if (std::any_of(gate.qubits.begin(), gate.qubits.end(), [&](std::size_t q) { return anc.count(q) > 0; })) {
                g.e.push_back(i);
                sys.insert(gate.qubits.begin(), gate.qubits.end());
            }
        }
        for (std::size_t q : anc) {
            sys.erase(q);
        }
        g.anc.assign(anc.begin(), anc.end());
        g.sys.assign(sys.begin(), sys.end());
    }
    return groups;
}

struct Analysis {
    RealMatrix m;
    RealMatrix p;
    double scale = 1.0;
};

void apply_gate(Vector& v, const Gate& g, const std::vector<std::size_t>& local) {
    if (g.kind == GateKind::Operator) {
        const double w = g.weights.empty() ? 1.0 : g.weights[0];
        apply_local(v, std::sqrt(w) * g.payload[0], local);
    } else {
        apply_local(v, gate_matrix(g), local);
    }
}

std::optional<Analysis> analyze(const Circuit& c, const Group& grp, const Caps& caps) {
    const std::size_t ns = grp.sys.size();
    const std::size_t na = grp.anc.size();
    if (ns + na > caps.statevector_qubits) {
        throw CapExceeded("system-ancilla simulation", ns + na, caps.statevector_qubits);
    }
    std::vector<std::size_t> order = grp.sys;
    order.insert(order.end(), grp.anc.begin(), grp.anc.end());
    auto local_of = [&](std::size_t q) {
        return static_cast<std::size_t>(std::find(order.begin(), order.end(), q) - order.begin());
    };

    // f_μ from the branches selected by the ancilla outcomes.
    const Index n_mu = Index{1} << na;
    const Index n_x = Index{1} << ns;
    std::vector<std::vector<Index>> f(n_mu);
    for (Index mu = 0; mu < n_mu; ++mu) {
        std::vector<Gate> gates;
        for (std::size_t i : grp.cc) {
            const Gate& g = c.gates[i];
            Index b = 0;
            for (std::size_t j = 0; j < g.wires.size(); ++j) {
                const std::size_t a = local_of(*c.qubit_of_wire(g.wires[j])) - ns;
                b |= static_cast<Index>(bit_of(mu, a)) << j;
            }
            gates.insert(gates.end(), g.branches[b].begin(), g.branches[b].end());
        }
        const auto rep = segment_to_phase_poly(gates, grp.sys, caps);
        if (!rep) {
            return std::nullopt;
        }
        f[mu] = rep->perm;
    }

    Analysis out;
    out.p = RealMatrix::Zero(static_cast<Eigen::Index>(n_mu), static_cast<Eigen::Index>(n_x));
    std::optional<double> s;
    for (Index x = 0; x < n_x; ++x) {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(Index{1} << (ns + na)));
        v(static_cast<Eigen::Index>(x)) = 1.0;
        for (std::size_t i : grp.e) {
            const Gate& g = c.gates[i];
            std::vector<std::size_t> local;
            for (std::size_t q : g.qubits) {
                local.push_back(local_of(q));
            }
            apply_gate(v, g, local);
        }
        const double total = v.squaredNorm();
        if (!(total > 0.0)) {
            return std::nullopt;
        }
        double kept = 0.0;
        for (Index mu = 0; mu < n_mu; ++mu) {
            const double pr = std::norm(v(static_cast<Eigen::Index>(x | (mu << ns))));
            out.p(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(x)) = pr;
            kept += pr;
        }
        if (total - kept > kLeakTol * total) {
            return std::nullopt;
        }
        if (s && std::abs(*s - kept) > kLeakTol * std::max(1.0, *s)) {
            return std::nullopt;
        }
        if (!s) {
            s = kept;
        }
    }
    out.scale = std::abs(*s - 1.0) <= kLeakTol ? 1.0 : *s;
    out.p /= out.scale;
    out.m = RealMatrix::Zero(static_cast<Eigen::Index>(n_x), static_cast<Eigen::Index>(n_x));
    for (Index x = 0; x < n_x; ++x) {
        for (Index mu = 0; mu < n_mu; ++mu) {
            out.m(static_cast<Eigen::Index>(f[mu][x]), static_cast<Eigen::Index>(x)) +=
                out.p(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(x));
        }
    }
    return out;
}

bool structurally_valid(const Circuit& c, const Group& grp, Side side, const PassContext& ctx) {
    if (grp.e.empty() || grp.sys.empty()) {
        return false;
    }
    std::set<std::size_t> branch;
    for (std::size_t i : grp.cc) {
        const Gate& g = c.gates[i];
        for (const auto& br : g.branches) {
            for (const Gate& inner : br) {
                if (inner.kind == GateKind::Operator && inner.payload.size() != 1) {
                    return false;
                }
            }
        }
        const auto b = branch_qubits(g);
        branch.insert(b.begin(), b.end());
    }
    const std::set<std::size_t> anc(grp.anc.begin(), grp.anc.end());
    if (intersects(branch, anc)) {
        return false;
    }
    const auto known = known_constant_bits(c, ctx.premap, ctx.caps);
    for (std::size_t q : grp.anc) {
        if (!known[q] || *known[q] != 0 || !c.is_measured(q)) {
            return false;
        }
    }
    for (std::size_t i : grp.e) {
        const Gate& g = c.gates[i];
        if (g.kind == GateKind::Operator && (g.payload.size() != 1 || (!g.weights.empty() && g.weights[0] < 0.0))) {
            return false;
        }
        if (i > grp.cc.front()) {
            return false;
        }
    }
    std::set<std::size_t> region(grp.sys.begin(), grp.sys.end());
    region.insert(grp.anc.begin(), grp.anc.end());
    std::set<std::size_t> members(grp.e.begin(), grp.e.end());
    members.insert(grp.cc.begin(), grp.cc.end());
    const std::size_t first = grp.e.front();
    const std::size_t last = grp.cc.back();
    auto touches = [&](std::size_t i) {
        const Gate& g = c.gates[i];
        return std::any_of(g.qubits.begin(), g.qubits.end(), [&](std::size_t q) { return region.count(q) > 0; });
    };
    const std::size_t lo = side == Side::Preparation ? 0 : first;
    const std::size_t hi = side == Side::Measurement ? c.gates.size() : last + 1;
    for (std::size_t i = lo; i < hi; ++i) {
        if (touches(i) && !members.count(i)) {
            return false;
        }
    }
    // The ancillas may not be touched again after the group.
    for (std::size_t i = last + 1; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        if (std::any_of(g.qubits.begin(), g.qubits.end(), [&](std::size_t q) { return anc.count(q) > 0; })) {
            return false;
        }
    }
    // Wires of the region are read by the group only.
    std::set<std::size_t> region_wires;
    for (std::size_t q : region) {
        if (const auto w = c.wire_of(q)) {
            region_wires.insert(*w);
        }
    }
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        if (g.kind != GateKind::ClassicallyControlled || members.count(i)) {
            continue;
        }
        for (std::size_t w : g.wires) {
            if (region_wires.count(w)) {
                return false;
            }
        }
    }
    if (side == Side::Measurement) {
        return std::all_of(grp.sys.begin(), grp.sys.end(), [&](std::size_t q) { return c.is_measured(q); });
    }
    return std::all_of(grp.sys.begin(), grp.sys.end(), [&](std::size_t q) { return basis_prepared(c, q, ctx); });
}

std::optional<PassResult> fold_once(const Circuit& c, const PassContext& ctx, Side side) {
    for (const Group& grp : find_groups(c)) {
        if (!structurally_valid(c, grp, side, ctx)) {
            continue;
        }
        const auto an = analyze(c, grp, ctx.caps);
        if (!an) {
            continue;
        }
        PassResult r;
        std::vector<bool> remove(c.gates.size(), false);
        for (std::size_t i : grp.e) {
            remove[i] = true;
        }
        for (std::size_t i : grp.cc) {
            remove[i] = true;
        }
        for (std::size_t q : grp.anc) {
            r.dropped_wires.push_back(*c.wire_of(q));
        }
        std::sort(r.dropped_wires.begin(), r.dropped_wires.end());
        r.circuit = drop_wires(without_gates(c, remove), r.dropped_wires);
        if (side == Side::Measurement) {
            std::vector<std::size_t> wires;
            for (std::size_t q : grp.sys) {
                wires.push_back(*r.circuit.wire_of(q));
            }
            r.post_stage = ClassicalStage::stochastic_on(r.circuit.num_wires(), wires, an->m, 1e-9);
        } else {
            r.premap = ClassicalStage::stochastic_on(c.width, grp.sys, an->m, 1e-9);
        }
        r.scale = an->scale;
        r.changed = true;
        r.report.system_matrix = an->m;
        r.report.outcome_probabilities = an->p;
        std::string names;
        for (std::size_t q : grp.anc) {
            names += (names.empty() ? "" : ",") + std::to_string(q + 1);
        }
        r.report.notes.push_back("folded " + std::to_string(grp.cc.size()) + " classically controlled gates and " +
                                 std::to_string(grp.e.size()) + " ancilla gates (ancillas " + names + ")");
        return r;
    }
    return std::nullopt;
}

PassResult fold_all(const Circuit& c, const PassContext& ctx, Side side, const std::string& rule) {
    HybridProgram prog = HybridProgram::from_circuit(c);
    std::optional<ClassicalStage> premap;
    RewriteReport last;
    std::vector<std::string> notes;
    bool changed = false;
    while (true) {
        PassContext local = ctx;
        std::optional<ClassicalStage> effective;
        if (prog.input_premap) {
            effective = ctx.premap ? compose_stages(*ctx.premap, *prog.input_premap, ctx.caps) : *prog.input_premap;
            local.premap = &*effective;
        }
        auto r = fold_once(prog.circuit, local, side);
        if (!r || !absorb_pass_result(prog, *r, ctx.caps)) {
            break;
        }
        changed = true;
        last = r->report;
        notes.insert(notes.end(), r->report.notes.begin(), r->report.notes.end());
    }
    PassResult out;
    out.circuit = prog.circuit;
    out.changed = changed;
    out.scale = prog.scale;
    out.premap = prog.input_premap;
    if (!prog.post_stages.empty()) {
        ClassicalStage post = prog.post_stages.front();
        for (std::size_t k = 1; k < prog.post_stages.size(); ++k) {
            post = compose_stages(post, prog.post_stages[k], ctx.caps);
        }
        out.post_stage = std::move(post);
    }
    for (std::size_t w = 0; w < c.num_wires(); ++w) {
        if (std::find(prog.output_wires.begin(), prog.output_wires.end(), w) == prog.output_wires.end()) {
            out.dropped_wires.push_back(w);
        }
    }
    out.report.system_matrix = last.system_matrix;
    out.report.outcome_probabilities = last.outcome_probabilities;
    out.report.notes = std::move(notes);
    finalize(out, c, rule);
    if (!changed) {
        out.report.notes.push_back("no system-ancilla group matched");
    }
    return out;
}

}  // namespace

PassResult si_fold_measurement(const Circuit& c, const PassContext& ctx) {
    return fold_all(c, ctx, Side::Measurement, "si-fold-measurement");
}

PassResult si_fold_preparation(const Circuit& c, const PassContext& ctx) {
    return fold_all(c, ctx, Side::Preparation, "si-fold-preparation");
}

}  // namespace qbound
