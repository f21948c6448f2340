#include "qbound/cutting.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbound {

namespace {

constexpr double kTol = 1e-10;

bool is_identity(const Matrix& m) { return linalg::max_abs_diff(m, Matrix::Identity(m.rows(), m.cols())) <= 1e-14; }

Matrix sigma(int k) {
    switch (k) {
        case 1:
            return linalg::pauli_x();
        case 2:
            return linalg::pauli_y();
        case 3:
            return linalg::pauli_z();
        default:
            return linalg::identity(2);
    }
}

void remap_qubit(Gate& g, std::size_t from, std::size_t to) {
    std::replace(g.qubits.begin(), g.qubits.end(), from, to);
    if (g.kind == GateKind::ClassicallyControlled) {
        for (auto& branch : g.branches) {
            for (Gate& inner : branch) {
                remap_qubit(inner, from, to);
            }
        }
        std::sort(g.qubits.begin(), g.qubits.end());
    }
}

Circuit slice(const Circuit& c, std::size_t lo, std::size_t hi) {
    Circuit out = c;
    out.gates.assign(c.gates.begin() + static_cast<std::ptrdiff_t>(lo), c.gates.begin() + static_cast<std::ptrdiff_t>(hi));
    return out;
}

void insert_operator(std::vector<Gate>& out, std::size_t q, const Matrix& m) {
    if (is_identity(m)) {
        return;
    }
    if (linalg::is_unitary(m, 1e-12)) {
        out.push_back(Gate::matrix({q}, m));
    } else {
        out.push_back(Gate::op({q}, {m}, {1.0}));
    }
}

}  // namespace

std::string_view role_name(InsertionRole role) {
    switch (role) {
        case InsertionRole::Identity:
            return "identity";
        case InsertionRole::Pauli:
            return "pauli";
        case InsertionRole::Projector:
            return "projector";
        case InsertionRole::Rotation:
            return "rotation";
        case InsertionRole::Observable:
            return "observable";
        case InsertionRole::State:
            return "state";
    }
    return "unknown";
}

std::vector<CutTerm> horizontal_cut_terms(double theta, const Matrix& a1, const Matrix& a2) {
    for (const Matrix* a : {&a1, &a2}) {
        if (a->rows() != 2 || a->cols() != 2 || linalg::max_abs_diff(*a * *a, linalg::identity(2)) > kTol) {
            throw std::invalid_argument("horizontal cut: A1 and A2 must be single-qubit involutions");
        }
    }
    const Matrix one = linalg::identity(2);
    const Complex i(0.0, 1.0);
    const double r = 1.0 / std::sqrt(2.0);
    auto proj = [&](const Matrix& a, double s) { return Matrix(0.5 * (one + s * a)); };
    auto rot = [&](const Matrix& a, double s) { return Matrix(r * (one + s * i * a)); };
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double cs = c * s;
    using R = InsertionRole;
    auto term = [](double coeff, Matrix p, Matrix q, R rp, R rq) {
        return CutTerm{coeff, std::move(p), std::move(q), CutKind::Horizontal, {rp, rq}};
    };
    return {
        term(c * c, one, one, R::Identity, R::Identity),
        term(s * s, a1, a2, R::Pauli, R::Pauli),
        term(cs, proj(a1, 1), rot(a2, 1), R::Projector, R::Rotation),
        term(-cs, proj(a1, -1), rot(a2, 1), R::Projector, R::Rotation),
        term(-cs, proj(a1, 1), rot(a2, -1), R::Projector, R::Rotation),
        term(cs, proj(a1, -1), rot(a2, -1), R::Projector, R::Rotation),
        term(cs, rot(a1, 1), proj(a2, 1), R::Rotation, R::Projector),
        term(-cs, rot(a1, -1), proj(a2, 1), R::Rotation, R::Projector),
        term(-cs, rot(a1, 1), proj(a2, -1), R::Rotation, R::Projector),
        term(cs, rot(a1, -1), proj(a2, -1), R::Rotation, R::Projector),
    };
}

std::vector<CutTerm> vertical_cut_terms() {
    std::vector<CutTerm> out;
    const Matrix one = linalg::identity(2);
    for (int k = 1; k <= 8; ++k) {
        CutTerm t;
        t.kind = CutKind::Vertical;
        t.coeff = (k == 4 || k == 6 || k == 8) ? -0.5 : 0.5;
        t.first = sigma((k - 1) / 2);
        if (k == 1) {
            t.second = Matrix::Zero(2, 2);
            t.second(0, 0) = 1.0;
        } else if (k == 2) {
            t.second = Matrix::Zero(2, 2);
            t.second(1, 1) = 1.0;
        } else {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            t.second = 0.5 * (one - sign * t.first);
        }
        t.roles = {InsertionRole::Observable, InsertionRole::State};
        out.push_back(std::move(t));
    }
    return out;
}

Matrix horizontal_channel_apply(std::span<const CutTerm> terms, const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const CutTerm& t : terms) {
        const Matrix k = linalg::kron_lsb({t.first, t.second});
        out += t.coeff * k * rho * k.adjoint();
    }
    return out;
}

Matrix vertical_reconstruct(std::span<const CutTerm> terms, const Matrix& rho) {
    Matrix out = Matrix::Zero(2, 2);
    for (const CutTerm& t : terms) {
        out += t.coeff * (t.first * rho).trace() * t.second;
    }
    return out;
}

double sampling_overhead(std::span<const CutTerm> terms) {
    double s = 0.0;
    for (const CutTerm& t : terms) {
        s += std::abs(t.coeff);
    }
    return s;
}

double recombine_expectation(std::span<const double> coeffs, std::span<const double> values) {
    if (coeffs.size() != values.size()) {
        throw std::invalid_argument("recombine_expectation: " + std::to_string(coeffs.size()) + " coefficients but " +
                                    std::to_string(values.size()) + " values");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        s += coeffs[k] * values[k];
    }
    return s;
}

Matrix exponential_matrix(const ExponentialForm& form) {
    const Matrix p = linalg::kron_lsb({form.a1, form.a2});
    return std::cos(form.theta) * linalg::identity(4) + Complex(0.0, std::sin(form.theta)) * p;
}

std::optional<ExponentialForm> extract_exponential(const Matrix& u) {
    if (u.rows() != 4 || u.cols() != 4) {
        return std::nullopt;
    }
    for (int j = 1; j <= 3; ++j) {
        for (int k = 1; k <= 3; ++k) {
            const Matrix p = linalg::kron_lsb({sigma(j), sigma(k)});
            const Complex c = u.trace() / 4.0;
            const Complex s = (u * p).trace() / Complex(0.0, 4.0);
            if (std::abs(c.imag()) > kTol || std::abs(s.imag()) > kTol || std::abs(s.real()) <= kTol) {
                continue;
            }
            ExponentialForm f{std::atan2(s.real(), c.real()), sigma(j), sigma(k)};
            if (linalg::max_abs_diff(u, exponential_matrix(f)) <= kTol) {
                return f;
            }
        }
    }
    return std::nullopt;
}

CutResult cut_gate(const Circuit& circuit, std::size_t index, std::optional<ExponentialForm> form) {
    if (index >= circuit.gates.size()) {
        throw std::invalid_argument("cut_gate: gate index " + std::to_string(index) + " out of range");
    }
    const Gate& g = circuit.gates[index];
    if (g.qubits.size() != 2 || !g.is_unitary_kind()) {
        throw std::invalid_argument("cut_gate: gate " + std::to_string(index) + " is not a two-qubit unitary");
    }
    const Matrix u = gate_matrix(g);
    if (form) {
        if (linalg::max_abs_diff(u, exponential_matrix(*form)) > kTol) {
            throw std::invalid_argument("cut_gate: gate " + std::to_string(index) +
                                        " does not equal the supplied exponential form");
        }
    } else {
        form = extract_exponential(u);
        if (!form) {
            throw std::invalid_argument("cut_gate: gate " + std::to_string(index) +
                                        " is not of the form exp(i theta A1 x A2) with Pauli A1, A2");
        }
    }
    CutResult r;
    r.kind = CutKind::Horizontal;
    r.form = form;
    r.terms = horizontal_cut_terms(form->theta, form->a1, form->a2);
    r.prefix = slice(circuit, 0, index);
    r.suffix = slice(circuit, index + 1, circuit.gates.size());
    for (const CutTerm& t : r.terms) {
        CutVariant v;
        v.coeff = t.coeff;
        v.circuit = circuit;
        std::vector<Gate> repl;
        insert_operator(repl, g.qubits[0], t.first);
        insert_operator(repl, g.qubits[1], t.second);
        auto& gates = v.circuit.gates;
        gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(index));
        gates.insert(gates.begin() + static_cast<std::ptrdiff_t>(index), repl.begin(), repl.end());
        r.variants.push_back(std::move(v));
    }
    return r;
}

CutResult cut_wire(const Circuit& circuit, std::size_t qubit, std::size_t position) {
    if (qubit >= circuit.width) {
        throw std::invalid_argument("cut_wire: qubit " + std::to_string(qubit + 1) + " out of range");
    }
    if (position > circuit.gates.size()) {
        throw std::invalid_argument("cut_wire: position " + std::to_string(position) + " exceeds the gate count");
    }
    const auto wire = circuit.wire_of(qubit);
    for (std::size_t i = 0; i < position; ++i) {
        const Gate& g = circuit.gates[i];
        if (wire && std::find(g.wires.begin(), g.wires.end(), *wire) != g.wires.end()) {
            throw std::invalid_argument("cut_wire: gate " + std::to_string(i) + " before the cut reads the wire of qubit " +
                                        std::to_string(qubit + 1));
        }
    }
    CutResult r;
    r.kind = CutKind::Vertical;
    r.terms = vertical_cut_terms();
    r.prefix = slice(circuit, 0, position);
    r.suffix = slice(circuit, position, circuit.gates.size());
    const std::size_t fresh = circuit.width;
    const std::size_t sign_wire = circuit.num_wires();
    for (std::size_t k = 1; k <= r.terms.size(); ++k) {
        CutVariant v;
        v.coeff = r.terms[k - 1].coeff;
        Circuit& out = v.circuit;
        out.width = circuit.width + 1;
        out.preparations = circuit.preparations;
        out.preparations.push_back(Prep::Zero);
        out.gates = r.prefix.gates;
        // Readout in the O_k eigenbasis.
        const std::size_t pauli = (k - 1) / 2;
        if (pauli == 1) {
            out.gates.push_back(Gate::h(qubit));
        } else if (pauli == 2) {
            out.gates.push_back(Gate::phase(qubit, -kPi / 2));
            out.gates.push_back(Gate::h(qubit));
        }
        // Preparation of ρ_k on the fresh qubit.
        if (k == 2 || k == 4 || k == 6 || k == 8) {
            out.gates.push_back(Gate::x(fresh));
        }
        if (k >= 3 && k <= 6) {
            out.gates.push_back(Gate::h(fresh));
        }
        if (k == 5 || k == 6) {
            out.gates.push_back(Gate::s(fresh));
        }
        for (Gate g : r.suffix.gates) {
            remap_qubit(g, qubit, fresh);
            out.gates.push_back(std::move(g));
        }
        for (const Measurement& m : circuit.measurements) {
            out.measurements.push_back({m.qubit == qubit ? fresh : m.qubit, m.wire});
        }
        out.measurements.push_back({qubit, sign_wire});
        v.sign_wire = sign_wire;
        v.signed_readout = pauli != 0;
        r.variants.push_back(std::move(v));
    }
    return r;
}

std::vector<double> recombine_labelled(std::span<const VariantRun> runs, std::span<const std::size_t> keep) {
    std::vector<double> out(std::size_t{1} << keep.size(), 0.0);
    for (const VariantRun& run : runs) {
        std::vector<std::size_t> pos;
        for (std::size_t label : keep) {
            const auto it = std::find(run.labels.begin(), run.labels.end(), label);
            if (it == run.labels.end()) {
                throw std::invalid_argument("recombine: variant lacks output wire " + std::to_string(label + 1));
            }
            pos.push_back(static_cast<std::size_t>(it - run.labels.begin()));
        }
        std::optional<std::size_t> sign_pos;
        if (run.sign_label) {
            const auto it = std::find(run.labels.begin(), run.labels.end(), *run.sign_label);
            if (it == run.labels.end()) {
                throw std::invalid_argument("recombine: variant lacks its sign wire");
            }
            sign_pos = static_cast<std::size_t>(it - run.labels.begin());
        }
        if (run.dist.size() != (std::size_t{1} << run.labels.size())) {
            throw std::invalid_argument("recombine: distribution size does not match the wire labels");
        }
        for (Index i = 0; i < run.dist.size(); ++i) {
            const double lambda = sign_pos && bit_of(i, *sign_pos) ? -1.0 : 1.0;
            out[extract_bits(i, pos)] += run.coeff * lambda * run.dist[i];
        }
    }
    return out;
}

}  // namespace qbound
