#include "pass_internal.h"

#include "qbound/phase_poly.h"
#include "qbound/simulator.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbound {

using namespace detail;

ZxzAngles zxz_decompose(const Matrix& u) {
    if (u.rows() != 2 || u.cols() != 2) {
        throw std::invalid_argument("zxz_decompose: expected a 2x2 matrix");
    }
    const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    const Matrix su = u / std::sqrt(det);
    const Complex alpha = su(0, 0);
    const Complex beta = su(0, 1);
    const double arg_a = std::abs(alpha) < 1e-14 ? 0.0 : std::arg(alpha);
    const double arg_b = std::abs(beta) < 1e-14 ? 0.0 : std::arg(beta);
    ZxzAngles z;
    z.a = arg_a + arg_b + kPi / 2;
    z.c = arg_a - arg_b - kPi / 2;
    z.b = 2.0 * std::atan2(std::abs(beta), std::abs(alpha));
    return z;
}

namespace {

Matrix block_unitary(const Circuit& c, const FactorHint& h) {
    const auto dim = static_cast<Eigen::Index>(Index{1} << h.qubits.size());
    Matrix u = Matrix::Identity(dim, dim);
    for (std::size_t i = h.first_gate; i < h.first_gate + h.gate_count; ++i) {
        const Gate& g = c.gates[i];
        if (!g.is_unitary_kind()) {
            throw std::invalid_argument("factor hint '" + h.name + "': block contains a non-unitary gate");
        }
        std::vector<std::size_t> local;
        for (std::size_t q : g.qubits) {
            const auto it = std::find(h.qubits.begin(), h.qubits.end(), q);
            if (it == h.qubits.end()) {
                throw std::invalid_argument("factor hint '" + h.name + "': gate " + std::to_string(i) +
                                            " acts outside the hint qubits");
            }
            local.push_back(static_cast<std::size_t>(it - h.qubits.begin()));
        }
        apply_local(u, gate_matrix(g), local);
    }
    return u;
}

Circuit apply_hints(const Circuit& c, const std::vector<FactorHint>& hints, RewriteReport& report) {
    std::vector<const FactorHint*> order;
    for (const FactorHint& h : hints) {
        order.push_back(&h);
    }
    std::sort(order.begin(), order.end(),
              [](const FactorHint* a, const FactorHint* b) { return a->first_gate > b->first_gate; });
    Circuit out = c;
    for (const FactorHint* h : order) {
        if (h->gate_count == 0 || h->first_gate + h->gate_count > c.gates.size()) {
            throw std::invalid_argument("factor hint '" + h->name + "': gate range out of bounds");
        }
        const auto dim = static_cast<Eigen::Index>(Index{1} << h->qubits.size());
        if (h->v.rows() != dim || h->v.cols() != dim || h->f.rows() != dim || h->f.cols() != dim) {
            throw std::invalid_argument("factor hint '" + h->name + "': V and F must match the hint qubits");
        }
        if (!linalg::is_unitary(h->v, 1e-10) || !linalg::is_unitary(h->f, 1e-10)) {
            throw std::invalid_argument("factor hint '" + h->name + "': V and F must be unitary");
        }
        if (!incoherent_check(h->f, 1e-10)) {
            throw std::invalid_argument("factor hint '" + h->name + "': F has no phase polynomial representation");
        }
        const Matrix u = block_unitary(c, *h);
        const Matrix product = h->side == Side::Measurement ? Matrix(h->f * h->v) : Matrix(h->v * h->f);
        const double err = linalg::max_abs_diff(u, product);
        if (!(err <= 1e-10)) {
            throw std::invalid_argument("factor hint '" + h->name + "': factors differ from the block by " +
                                        std::to_string(err));
        }
        std::vector<Gate> repl;
        if (h->side == Side::Measurement) {
            repl = {Gate::matrix(h->qubits, h->v), Gate::matrix(h->qubits, h->f)};
        } else {
            repl = {Gate::matrix(h->qubits, h->f), Gate::matrix(h->qubits, h->v)};
        }
        const auto first = out.gates.begin() + static_cast<std::ptrdiff_t>(h->first_gate);
        out.gates.erase(first, first + static_cast<std::ptrdiff_t>(h->gate_count));
        out.gates.insert(out.gates.begin() + static_cast<std::ptrdiff_t>(h->first_gate), repl.begin(), repl.end());
        report.notes.push_back("applied factor hint '" + h->name + "'");
    }
    return out;
}

std::size_t trimmed_size(const Circuit& c, Side side, const PassContext& ctx) {
    return side == Side::Measurement ? trim_measurement_boundary(c, ctx).circuit.gates.size()
                                     : trim_preparation_boundary(c, ctx).circuit.gates.size();
}

// CX followed by H on both qubits equals H on both qubits followed by the reversed CX.
bool try_hadamard_swap(Circuit& cur, const PassContext& ctx, RewriteReport& report) {
    for (std::size_t i = 0; i < cur.gates.size(); ++i) {
        const Gate& g = cur.gates[i];
        if (g.kind != GateKind::CX) {
            continue;
        }
        const std::size_t c = g.qubits[0];
        const std::size_t t = g.qubits[1];
        for (Side side : {Side::Measurement, Side::Preparation}) {
            const bool meas = side == Side::Measurement;
            const auto j1 = meas ? next_use(cur, c, i) : prev_use(cur, c, i);
            const auto j2 = meas ? next_use(cur, t, i) : prev_use(cur, t, i);
            if (!j1 || !j2 || cur.gates[*j1].kind != GateKind::H || cur.gates[*j2].kind != GateKind::H) {
                continue;
            }
            Circuit cand = cur;
            const std::vector<Gate> repl = meas ? std::vector<Gate>{Gate::h(c), Gate::h(t), Gate::cx(t, c)}
                                                : std::vector<Gate>{Gate::cx(t, c), Gate::h(c), Gate::h(t)};
            const std::size_t hi = std::max(*j1, *j2);
            const std::size_t lo = std::min(*j1, *j2);
            if (meas) {
                cand.gates.erase(cand.gates.begin() + static_cast<std::ptrdiff_t>(hi));
                cand.gates.erase(cand.gates.begin() + static_cast<std::ptrdiff_t>(lo));
                cand.gates.erase(cand.gates.begin() + static_cast<std::ptrdiff_t>(i));
                cand.gates.insert(cand.gates.begin() + static_cast<std::ptrdiff_t>(i), repl.begin(), repl.end());
            } else {
                cand.gates.erase(cand.gates.begin() + static_cast<std::ptrdiff_t>(i));
                cand.gates.insert(cand.gates.begin() + static_cast<std::ptrdiff_t>(i), repl.begin(), repl.end());
                cand.gates.erase(cand.gates.begin() + static_cast<std::ptrdiff_t>(hi));
                cand.gates.erase(cand.gates.begin() + static_cast<std::ptrdiff_t>(lo));
            }
            if (trimmed_size(cand, side, ctx) < trimmed_size(cur, side, ctx)) {
                cur = std::move(cand);
                report.notes.push_back(std::string("reversed CX through Hadamards at gate ") + std::to_string(i) +
                                       (meas ? " (measurement side)" : " (preparation side)"));
                return true;
            }
        }
    }
    return false;
}

bool mergeable(const Gate& g, std::size_t q) {
    return g.qubits.size() == 1 && g.qubits[0] == q && g.is_unitary_kind() && g.kind != GateKind::RX;
}

double phase_angle(const Gate& g) {
    switch (g.kind) {
        case GateKind::Z:
            return kPi;
        case GateKind::S:
            return kPi / 2;
        case GateKind::T:
            return kPi / 4;
        default:
            return g.angle;
    }
}

// rz(angle) placed before (`after` false) or after `g`.
Gate merge_rz(const Gate& g, double angle, bool rz_first) {
    const std::size_t q = g.qubits[0];
    switch (g.kind) {
        case GateKind::RZ:
            return Gate::rz(q, g.angle + angle);
        case GateKind::Z:
        case GateKind::S:
        case GateKind::T:
        case GateKind::Phase:
            return Gate::phase(q, phase_angle(g) - angle);
        default: {
            const Matrix m = gate_matrix(g);
            const Matrix r = linalg::rz(angle);
            return Gate::matrix({q}, rz_first ? Matrix(m * r) : Matrix(r * m));
        }
    }
}

// Moves rz(angle), sitting just before gate i on q, towards the start.
void push_backward(Circuit& c, std::size_t i, std::size_t q, double angle, const PassContext& ctx) {
    std::size_t pos = i;
    auto j = prev_use(c, q, pos);
    while (j) {
        const Gate& g = c.gates[*j];
        if (mergeable(g, q)) {
            c.gates[*j] = merge_rz(g, angle, false);
            return;
        }
        if (!diagonal_on(g, q)) {
            c.gates.insert(c.gates.begin() + static_cast<std::ptrdiff_t>(*j + 1), Gate::rz(q, angle));
            return;
        }
        pos = *j;
        j = prev_use(c, q, pos);
    }
    if (!basis_prepared(c, q, ctx)) {
        c.gates.insert(c.gates.begin() + static_cast<std::ptrdiff_t>(i), Gate::rz(q, angle));
    }
}

// Moves rz(angle), sitting just after gate i on q, towards the end.
void push_forward(Circuit& c, std::size_t i, std::size_t q, double angle) {
    std::size_t pos = i;
    auto j = next_use(c, q, pos);
    while (j) {
        const Gate& g = c.gates[*j];
        if (mergeable(g, q)) {
            c.gates[*j] = merge_rz(g, angle, true);
            return;
        }
        if (!diagonal_on(g, q)) {
            c.gates.insert(c.gates.begin() + static_cast<std::ptrdiff_t>(*j), Gate::rz(q, angle));
            return;
        }
        pos = *j;
        j = next_use(c, q, pos);
    }
}

// Single-qubit boundary gate -> rx with the boundary rz dropped and the other rz absorbed.
bool try_boundary_rx(Circuit& cur, const PassContext& ctx, RewriteReport& report) {
    const std::size_t base = count_coherent_single_qubit(cur);
    for (std::size_t i = 0; i < cur.gates.size(); ++i) {
        const Gate& g = cur.gates[i];
        if (!(g.qubits.size() == 1 && g.is_unitary_kind() && g.kind != GateKind::RX && !gate_phase_poly(g))) {
            continue;
        }
        const std::size_t q = g.qubits[0];
        const ZxzAngles z = zxz_decompose(gate_matrix(g));
        for (Side side : {Side::Preparation, Side::Measurement}) {
            Circuit cand = cur;
            cand.gates[i] = Gate::rx(q, z.b);
            if (side == Side::Measurement) {
                if (!cur.is_measured(q) || used_after(cur, q, i)) {
                    continue;
                }
                push_backward(cand, i, q, z.c, ctx);
            } else {
                if (!basis_prepared(cur, q, ctx) || used_before(cur, q, i)) {
                    continue;
                }
                push_forward(cand, i, q, z.a);
            }
            if (cand.gates.size() <= cur.gates.size() && count_coherent_single_qubit(cand) < base) {
                cur = std::move(cand);
                report.notes.push_back("rewrote gate " + std::to_string(i) + " on qubit " + std::to_string(q + 1) +
                                       " as rx(" + std::to_string(z.b) + ")" +
                                       (side == Side::Measurement ? " before its measurement" : " after its preparation"));
                return true;
            }
        }
    }
    return false;
}

}  // namespace

PassResult factor_and_trim(const Circuit& c, const PassContext& ctx) {
    PassResult r;
    Circuit cur = apply_hints(c, ctx.hints, r.report);
    bool changed = !ctx.hints.empty();
    std::optional<ClassicalStage> post;
    std::optional<ClassicalStage> pre;
    for (int iter = 0; iter < 64; ++iter) {
        bool any = false;
        PassContext local = ctx;
        std::optional<ClassicalStage> effective;
        if (pre) {
            effective = ctx.premap ? compose_stages(*ctx.premap, *pre, ctx.caps) : *pre;
            local.premap = &*effective;
        }
        while (try_hadamard_swap(cur, local, r.report) || try_boundary_rx(cur, local, r.report)) {
            any = true;
        }
        PassResult m = trim_measurement_boundary(cur, local);
        if (m.changed) {
            post = post ? compose_stages(*m.post_stage, *post, ctx.caps) : *m.post_stage;
            cur = std::move(m.circuit);
            any = true;
        }
        PassResult p = trim_preparation_boundary(cur, local);
        if (p.changed) {
            if (p.premap) {
                pre = pre ? compose_stages(*pre, *p.premap, ctx.caps) : *p.premap;
            }
            cur = std::move(p.circuit);
            any = true;
        }
        changed = changed || any;
        if (!any) {
            break;
        }
    }
    r.circuit = std::move(cur);
    r.post_stage = std::move(post);
    r.premap = std::move(pre);
    r.changed = changed;
    finalize(r, c, "factor-and-trim");
    return r;
}

}  // namespace qbound
