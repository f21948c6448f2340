#include "qbound/simulator.h"

#include "qbound/errors.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace qbound {

namespace {

struct Branch {
    double weight = 1.0;
    Vector state;
};

template <class M>
void apply_impl(M& m, const Matrix& u, std::span<const std::size_t> qubits) {
    const std::size_t k = qubits.size();
    const auto local_dim = static_cast<Eigen::Index>(Index{1} << k);
    if (u.rows() != local_dim || u.cols() != local_dim) {
        throw std::invalid_argument("apply_local: matrix size does not match operand count");
    }
    const auto dim = static_cast<Index>(m.rows());
    Index mask = 0;
    std::vector<Index> offsets(static_cast<std::size_t>(local_dim));
    for (std::size_t j = 0; j < k; ++j) {
        if ((Index{1} << qubits[j]) >= dim) {
            throw std::invalid_argument("apply_local: qubit " + std::to_string(qubits[j]) + " out of range");
        }
        mask |= Index{1} << qubits[j];
    }
    for (Index l = 0; l < static_cast<Index>(local_dim); ++l) {
        offsets[l] = deposit_bits(0, l, qubits);
    }
    Vector in(local_dim);
    Vector out(local_dim);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Index base = 0; base < dim; ++base) {
            if ((base & mask) != 0) {
                continue;
            }
            for (Eigen::Index l = 0; l < local_dim; ++l) {
                in(l) = m(static_cast<Eigen::Index>(base | offsets[static_cast<std::size_t>(l)]), c);
            }
            out.noalias() = u * in;
            for (Eigen::Index l = 0; l < local_dim; ++l) {
                m(static_cast<Eigen::Index>(base | offsets[static_cast<std::size_t>(l)]), c) = out(l);
            }
        }
    }
}

void check_width(const Circuit& c, const Caps& caps) {
    if (c.width > caps.statevector_qubits) {
        throw CapExceeded("statevector simulation", c.width, caps.statevector_qubits);
    }
}

std::vector<std::size_t> wire_qubits(const Circuit& c) {
    std::vector<std::size_t> out(c.num_wires());
    for (const Measurement& m : c.measurements) {
        if (m.wire >= out.size()) {
            throw std::invalid_argument("measurement wires must be numbered 0..m-1");
        }
        out[m.wire] = m.qubit;
    }
    return out;
}

std::vector<std::size_t> gate_wire_qubits(const Circuit& c, const Gate& g) {
    std::vector<std::size_t> qs;
    for (std::size_t w : g.wires) {
        const auto q = c.qubit_of_wire(w);
        if (!q) {
            throw std::invalid_argument("classically controlled gate reads unmeasured wire " + std::to_string(w));
        }
        qs.push_back(*q);
    }
    return qs;
}

void project(Vector& v, std::span<const std::size_t> qubits, Index value) {
    for (Eigen::Index x = 0; x < v.size(); ++x) {
        if (extract_bits(static_cast<Index>(x), qubits) != value) {
            v(x) = 0.0;
        }
    }
}

void push_branch(std::vector<Branch>& out, Branch b, const Caps& caps) {
    if (b.weight == 0.0 || b.state.squaredNorm() == 0.0) {
        return;
    }
    if (out.size() >= caps.max_branches) {
        throw CapExceeded("simulation", out.size() + 1, caps.max_branches, "branches");
    }
    out.push_back(std::move(b));
}

std::vector<Branch> evolve(const Circuit& c, std::vector<Branch> branches, const Caps& caps) {
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::ClassicallyControlled) {
            const auto qs = gate_wire_qubits(c, g);
            std::vector<Branch> next;
            for (const Branch& b : branches) {
                for (Index v = 0; v < g.branches.size(); ++v) {
                    Branch nb{b.weight, b.state};
                    project(nb.state, qs, v);
                    if (nb.state.squaredNorm() == 0.0) {
                        continue;
                    }
                    for (const Gate& inner : g.branches[v]) {
                        apply_local(nb.state, gate_matrix(inner), inner.qubits);
                    }
                    push_branch(next, std::move(nb), caps);
                }
            }
            branches = std::move(next);
        } else if (g.kind == GateKind::Operator) {
            std::vector<Branch> next;
            for (const Branch& b : branches) {
                for (std::size_t i = 0; i < g.payload.size(); ++i) {
                    Branch nb{b.weight * (g.weights.empty() ? 1.0 : g.weights[i]), b.state};
                    apply_local(nb.state, g.payload[i], g.qubits);
                    push_branch(next, std::move(nb), caps);
                }
            }
            branches = std::move(next);
        } else {
            const Matrix u = gate_matrix(g);
            for (Branch& b : branches) {
                apply_local(b.state, u, g.qubits);
            }
        }
    }
    return branches;
}

std::vector<double> distribution_of(const Circuit& c, const std::vector<Branch>& branches) {
    const auto wq = wire_qubits(c);
    std::vector<double> out(Index{1} << wq.size(), 0.0);
    for (const Branch& b : branches) {
        for (Eigen::Index x = 0; x < b.state.size(); ++x) {
            const double p = std::norm(b.state(x));
            if (p != 0.0) {
                out[extract_bits(static_cast<Index>(x), wq)] += b.weight * p;
            }
        }
    }
    return out;
}

// Fixed preparations reset their qubits: Kraus operators |c><r| for every r.
std::vector<Branch> reset_branches(const Circuit& c, const StateVector& input) {
    if (input.width != c.width || input.amplitudes.size() != static_cast<Eigen::Index>(Index{1} << c.width)) {
        throw std::invalid_argument("input state width " + std::to_string(input.width) + " does not match circuit width " +
                                    std::to_string(c.width));
    }
    std::vector<std::size_t> fixed;
    Index target = 0;
    for (std::size_t q = 0; q < c.width; ++q) {
        if (c.preparations[q] != Prep::Free) {
            fixed.push_back(q);
            target = with_bit(target, fixed.size() - 1, c.preparations[q] == Prep::One ? 1 : 0);
        }
    }
    std::vector<Branch> out;
    for (Index r = 0; r < (Index{1} << fixed.size()); ++r) {
        Branch b{1.0, Vector::Zero(input.amplitudes.size())};
        for (Eigen::Index x = 0; x < input.amplitudes.size(); ++x) {
            if (extract_bits(static_cast<Index>(x), fixed) == r) {
                b.state(static_cast<Eigen::Index>(deposit_bits(static_cast<Index>(x), target, fixed))) =
                    input.amplitudes(x);
            }
        }
        if (b.state.squaredNorm() > 0.0) {
            out.push_back(std::move(b));
        }
    }
    return out;
}

std::vector<Branch> basis_branch(std::size_t width, Index index) {
    Branch b{1.0, Vector::Zero(static_cast<Eigen::Index>(Index{1} << width))};
    b.state(static_cast<Eigen::Index>(index)) = 1.0;
    return {std::move(b)};
}

std::vector<double> finish_program(const HybridProgram& p, std::vector<double> dist) {
    for (const ClassicalStage& s : p.post_stages) {
        dist = s.apply(dist);
    }
    if (p.scale != 1.0) {
        for (double& v : dist) {
            v *= p.scale;
        }
    }
    return dist;
}

void check_input_width(const Circuit& c, std::size_t width) {
    if (width != c.width) {
        throw std::invalid_argument("input width " + std::to_string(width) + " does not match circuit width " +
                                    std::to_string(c.width));
    }
}

Index draw(const std::vector<double>& cumulative, double u) {
    const double target = u * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto idx = static_cast<Index>(it - cumulative.begin());
    return std::min<Index>(idx, cumulative.size() - 1);
}

std::pair<double, double> gaussian_pair(std::mt19937_64& rng) {
    const double u1 = unit_from_bits(rng());
    const double u2 = unit_from_bits(rng());
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

}  // namespace

StateVector StateVector::basis(std::size_t width, Index index) {
    BasisState check(width, index);
    StateVector s;
    s.width = width;
    s.amplitudes = Vector::Zero(static_cast<Eigen::Index>(Index{1} << width));
    s.amplitudes(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
}

Observable Observable::product(std::vector<Matrix> factors) {
    for (const Matrix& f : factors) {
        if (f.rows() != 2 || f.cols() != 2 || !linalg::is_hermitian(f, 1e-10)) {
            throw std::invalid_argument("observable factors must be Hermitian 2x2 matrices");
        }
    }
    Observable o;
    o.factors = std::move(factors);
    return o;
}

Observable Observable::from_matrix(Matrix m) {
    if (!linalg::is_hermitian(m, 1e-10)) {
        throw std::invalid_argument("observable must be Hermitian");
    }
    log2_exact(static_cast<std::size_t>(m.rows()));
    Observable o;
    o.dense = std::move(m);
    return o;
}

std::size_t Observable::width() const {
    return dense ? log2_exact(static_cast<std::size_t>(dense->rows())) : factors.size();
}

Matrix Observable::to_dense() const { return dense ? *dense : linalg::kron_lsb(factors); }

void apply_local(Matrix& m, const Matrix& u, std::span<const std::size_t> qubits) { apply_impl(m, u, qubits); }
void apply_local(Vector& v, const Matrix& u, std::span<const std::size_t> qubits) { apply_impl(v, u, qubits); }

StateVector simulate_statevector(const Circuit& circuit, const BasisState& input, const Caps& caps) {
    check_input_width(circuit, input.width);
    return simulate_statevector(circuit, StateVector::basis(circuit.width, resolve_preparations(circuit, input.index)),
                                caps);
}

StateVector simulate_statevector(const Circuit& circuit, const StateVector& input, const Caps& caps) {
    check_width(circuit, caps);
    for (const Gate& g : circuit.gates) {
        if (!g.is_unitary_kind()) {
            throw std::invalid_argument("simulate_statevector: gate " + std::string(kind_name(g.kind)) +
                                        " needs branch expansion; use measurement_distribution");
        }
    }
    auto branches = reset_branches(circuit, input);
    if (branches.size() != 1) {
        throw std::invalid_argument("input state has weight on values overridden by fixed preparations");
    }
    branches = evolve(circuit, std::move(branches), caps);
    return StateVector{circuit.width, branches.front().state};
}

std::vector<double> measurement_distribution(const Circuit& circuit, const BasisState& input, const Caps& caps) {
    check_width(circuit, caps);
    check_input_width(circuit, input.width);
    return distribution_of(circuit,
                           evolve(circuit, basis_branch(circuit.width, resolve_preparations(circuit, input.index)), caps));
}

std::vector<double> measurement_distribution(const Circuit& circuit, const StateVector& input, const Caps& caps) {
    check_width(circuit, caps);
    return distribution_of(circuit, evolve(circuit, reset_branches(circuit, input), caps));
}

Matrix final_density(const Circuit& circuit, const StateVector& input, const Caps& caps) {
    check_width(circuit, caps);
    if (circuit.width > caps.density_qubits) {
        throw CapExceeded("density matrix", circuit.width, caps.density_qubits);
    }
    const auto branches = evolve(circuit, reset_branches(circuit, input), caps);
    const auto dim = static_cast<Eigen::Index>(Index{1} << circuit.width);
    Matrix rho = Matrix::Zero(dim, dim);
    for (const Branch& b : branches) {
        rho.noalias() += b.weight * (b.state * b.state.adjoint());
    }
    return rho;
}

Matrix apply_operator_terms(const Circuit& circuit, const Matrix& rho_in, const Caps& caps) {
    if (circuit.width > caps.density_qubits) {
        throw CapExceeded("density matrix", circuit.width, caps.density_qubits);
    }
    const auto dim = static_cast<Eigen::Index>(Index{1} << circuit.width);
    if (rho_in.rows() != dim || rho_in.cols() != dim) {
        throw std::invalid_argument("density matrix does not match circuit width");
    }
    auto conjugate = [](Matrix& rho, const Matrix& u, std::span<const std::size_t> qs) {
        apply_local(rho, u, qs);
        rho.adjointInPlace();
        apply_local(rho, u, qs);
        rho.adjointInPlace();
    };
    Matrix rho = rho_in;
    for (const Gate& g : circuit.gates) {
        if (g.kind == GateKind::ClassicallyControlled) {
            const auto qs = gate_wire_qubits(circuit, g);
            Matrix acc = Matrix::Zero(dim, dim);
            for (Index v = 0; v < g.branches.size(); ++v) {
                Matrix part = rho;
                for (Eigen::Index r = 0; r < dim; ++r) {
                    for (Eigen::Index c = 0; c < dim; ++c) {
                        if (extract_bits(static_cast<Index>(r), qs) != v ||
                            extract_bits(static_cast<Index>(c), qs) != v) {
                            part(r, c) = 0.0;
                        }
                    }
                }
                for (const Gate& inner : g.branches[v]) {
                    conjugate(part, gate_matrix(inner), inner.qubits);
                }
                acc += part;
            }
            rho = std::move(acc);
        } else if (g.kind == GateKind::Operator) {
            Matrix acc = Matrix::Zero(dim, dim);
            for (std::size_t i = 0; i < g.payload.size(); ++i) {
                Matrix part = rho;
                conjugate(part, g.payload[i], g.qubits);
                acc += (g.weights.empty() ? 1.0 : g.weights[i]) * part;
            }
            rho = std::move(acc);
        } else {
            conjugate(rho, gate_matrix(g), g.qubits);
        }
    }
    return rho;
}

double expectation_value(const StateVector& state, const Observable& obs) {
    if (obs.width() != state.width) {
        throw std::invalid_argument("observable width does not match state width");
    }
    Vector a = state.amplitudes;
    if (obs.dense) {
        a = (*obs.dense) * a;
    } else {
        for (std::size_t q = 0; q < obs.factors.size(); ++q) {
            const std::size_t qs[] = {q};
            apply_local(a, obs.factors[q], qs);
        }
    }
    const Complex v = state.amplitudes.dot(a);
    if (std::abs(v.imag()) > 1e-10) {
        throw std::runtime_error("expectation value has imaginary part " + std::to_string(v.imag()));
    }
    return v.real();
}

double expectation_value(const Matrix& rho, const Observable& obs) {
    const std::size_t width = log2_exact(static_cast<std::size_t>(rho.rows()));
    if (obs.width() != width) {
        throw std::invalid_argument("observable width does not match density matrix width");
    }
    const Complex v = (obs.to_dense() * rho).trace();
    if (std::abs(v.imag()) > 1e-10) {
        throw std::runtime_error("expectation value has imaginary part " + std::to_string(v.imag()));
    }
    return v.real();
}

Index resolve_preparations(const Circuit& circuit, Index input) {
    for (std::size_t q = 0; q < circuit.width; ++q) {
        if (circuit.preparations[q] == Prep::Zero) {
            input = with_bit(input, q, 0);
        } else if (circuit.preparations[q] == Prep::One) {
            input = with_bit(input, q, 1);
        }
    }
    return input;
}

std::vector<double> run_hybrid_exact(const HybridProgram& program, const BasisState& input, const Caps& caps) {
    const Circuit& c = program.circuit;
    check_width(c, caps);
    check_input_width(c, input.width);
    const Index resolved = resolve_preparations(c, input.index);
    std::vector<std::pair<Index, double>> starts{{resolved, 1.0}};
    if (program.input_premap) {
        if (program.input_premap->width() != c.width) {
            throw std::invalid_argument("premap width does not match circuit width");
        }
        starts = program.input_premap->column(resolved);
    }
    std::vector<double> dist(Index{1} << c.num_wires(), 0.0);
    for (const auto& [x, p] : starts) {
        const auto part = distribution_of(c, evolve(c, basis_branch(c.width, x), caps));
        for (std::size_t i = 0; i < dist.size(); ++i) {
            dist[i] += p * part[i];
        }
    }
    return finish_program(program, std::move(dist));
}

std::vector<double> run_hybrid_exact(const HybridProgram& program, const StateVector& input, const Caps& caps) {
    const Circuit& c = program.circuit;
    check_width(c, caps);
    auto branches = reset_branches(c, input);
    if (program.input_premap) {
        const ClassicalStage& pre = *program.input_premap;
        for (std::size_t q : pre.support()) {
            if (c.preparations[q] == Prep::Free) {
                throw InputError("premap acts on free qubit " + std::to_string(q + 1) +
                                 "; only basis-state inputs are supported");
            }
        }
        const Index fixed = resolve_preparations(c, 0);
        std::vector<Branch> next;
        for (const Branch& b : branches) {
            for (const auto& [y, p] : pre.column(fixed)) {
                const Index local = extract_bits(y, pre.support());
                Branch nb{b.weight * p, Vector::Zero(b.state.size())};
                for (Eigen::Index x = 0; x < b.state.size(); ++x) {
                    nb.state(static_cast<Eigen::Index>(deposit_bits(static_cast<Index>(x), local, pre.support()))) +=
                        b.state(x);
                }
                push_branch(next, std::move(nb), caps);
            }
        }
        branches = std::move(next);
    }
    return finish_program(program, distribution_of(c, evolve(c, std::move(branches), caps)));
}

std::vector<std::uint64_t> sample_hybrid(const HybridProgram& program, const BasisState& input, std::uint64_t shots,
                                         std::uint64_t seed, const Caps& caps) {
    if (shots == 0) {
        throw std::invalid_argument("sample_hybrid: shots must be positive");
    }
    if (program.scale != 1.0) {
        throw std::invalid_argument("sample_hybrid: scaled programs describe quasi-probabilities and cannot be sampled");
    }
    const Circuit& c = program.circuit;
    check_width(c, caps);
    check_input_width(c, input.width);
    const Index resolved = resolve_preparations(c, input.index);

    std::vector<std::pair<Index, double>> starts{{resolved, 1.0}};
    if (program.input_premap) {
        starts = program.input_premap->column(resolved);
    }
    std::vector<double> start_cdf;
    for (const auto& s : starts) {
        start_cdf.push_back((start_cdf.empty() ? 0.0 : start_cdf.back()) + s.second);
    }
    std::map<Index, std::vector<double>> cdf_cache;
    auto circuit_cdf = [&](Index x) -> const std::vector<double>& {
        auto it = cdf_cache.find(x);
        if (it == cdf_cache.end()) {
            auto dist = distribution_of(c, evolve(c, basis_branch(c.width, x), caps));
            for (std::size_t i = 1; i < dist.size(); ++i) {
                dist[i] += dist[i - 1];
            }
            it = cdf_cache.emplace(x, std::move(dist)).first;
        }
        return it->second;
    };

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(Index{1} << c.num_wires(), 0);
    std::vector<double> col_cdf;
    for (std::uint64_t s = 0; s < shots; ++s) {
        Index x = starts.front().first;
        if (starts.size() > 1) {
            x = starts[draw(start_cdf, unit_from_bits(rng()))].first;
        }
        Index outcome = draw(circuit_cdf(x), unit_from_bits(rng()));
        for (const ClassicalStage& stage : program.post_stages) {
            if (stage.kind() == StageKind::Deterministic) {
                outcome = stage.map(outcome);
                continue;
            }
            const auto col = stage.column(outcome);
            col_cdf.clear();
            for (const auto& e : col) {
                col_cdf.push_back((col_cdf.empty() ? 0.0 : col_cdf.back()) + e.second);
            }
            outcome = col[draw(col_cdf, unit_from_bits(rng()))].first;
        }
        ++counts[outcome];
    }
    return counts;
}

ClassicalStage kraus_to_stochastic(const KrausChannel& channel, std::string* warning) {
    if (channel.operators.empty()) {
        throw std::invalid_argument("Kraus channel needs at least one operator");
    }
    const Eigen::Index dim = channel.operators.front().rows();
    const std::size_t width = log2_exact(static_cast<std::size_t>(dim));
    Matrix completeness = Matrix::Zero(dim, dim);
    RealMatrix m = RealMatrix::Zero(dim, dim);
    bool strict = true;
    for (const Matrix& k : channel.operators) {
        if (k.rows() != dim || k.cols() != dim) {
            throw std::invalid_argument("Kraus operators must share one square shape");
        }
        completeness += k.adjoint() * k;
        m += k.cwiseAbs2();
        for (Eigen::Index c = 0; c < dim; ++c) {
            int col_hits = 0;
            int row_hits = 0;
            for (Eigen::Index r = 0; r < dim; ++r) {
                col_hits += std::abs(k(r, c)) > 1e-12 ? 1 : 0;
                row_hits += std::abs(k(c, r)) > 1e-12 ? 1 : 0;
            }
            strict = strict && col_hits <= 1 && row_hits <= 1;
        }
    }
    const double defect = linalg::max_abs_diff(completeness, Matrix::Identity(dim, dim));
    if (defect > 1e-10) {
        throw std::invalid_argument("Kraus completeness violated by " + std::to_string(defect));
    }
    if (!strict && warning != nullptr) {
        *warning = "channel is not strictly incoherent; column sums may deviate from 1";
    }
    return ClassicalStage::stochastic(width, std::move(m), 1e-10);
}

std::vector<double> marginalize(std::span<const double> dist, std::size_t num_wires, std::span<const std::size_t> keep) {
    if (dist.size() != (Index{1} << num_wires)) {
        throw std::invalid_argument("marginalize: distribution length does not match wire count");
    }
    for (std::size_t k : keep) {
        if (k >= num_wires) {
            throw std::invalid_argument("marginalize: wire out of range");
        }
    }
    std::vector<double> out(Index{1} << keep.size(), 0.0);
    for (Index x = 0; x < dist.size(); ++x) {
        out[extract_bits(x, keep)] += dist[x];
    }
    return out;
}

namespace {

template <class Input>
EquivalenceReport compare(const HybridProgram& a, const HybridProgram& b, std::span<const Input> inputs, double tol,
                          const Caps& caps) {
    if (a.circuit.width != b.circuit.width) {
        throw std::invalid_argument("equivalence_check: circuits have different widths");
    }
    EquivalenceReport rep;
    std::vector<std::size_t> keep_a;
    std::vector<std::size_t> keep_b;
    std::vector<std::size_t> labels = a.output_wires;
    std::sort(labels.begin(), labels.end());
    for (std::size_t label : labels) {
        const auto ib = std::find(b.output_wires.begin(), b.output_wires.end(), label);
        if (ib == b.output_wires.end()) {
            continue;
        }
        const auto ia = std::find(a.output_wires.begin(), a.output_wires.end(), label);
        keep_a.push_back(static_cast<std::size_t>(ia - a.output_wires.begin()));
        keep_b.push_back(static_cast<std::size_t>(ib - b.output_wires.begin()));
        rep.compared_wires.push_back(label);
    }
    if (rep.compared_wires.empty() && (a.num_outputs() > 0 || b.num_outputs() > 0)) {
        throw std::invalid_argument("equivalence_check: programs share no output wires");
    }
    for (const Input& in : inputs) {
        const auto da = marginalize(run_hybrid_exact(a, in, caps), a.num_outputs(), keep_a);
        const auto db = marginalize(run_hybrid_exact(b, in, caps), b.num_outputs(), keep_b);
        double dev = 0.0;
        for (std::size_t i = 0; i < da.size(); ++i) {
            dev = std::max(dev, std::abs(da[i] - db[i]));
        }
        rep.deviations.push_back(dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    rep.passed = rep.max_deviation <= tol;
    return rep;
}

}  // namespace

EquivalenceReport equivalence_check(const HybridProgram& a, const HybridProgram& b, std::span<const BasisState> inputs,
                                    double tol, const Caps& caps) {
    return compare(a, b, inputs, tol, caps);
}

EquivalenceReport equivalence_check(const HybridProgram& a, const HybridProgram& b,
                                    std::span<const StateVector> inputs, double tol, const Caps& caps) {
    return compare(a, b, inputs, tol, caps);
}

StateVector random_state(std::size_t width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    StateVector s;
    s.width = width;
    s.amplitudes = Vector(static_cast<Eigen::Index>(Index{1} << width));
    for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
        const auto [re, im] = gaussian_pair(rng);
        s.amplitudes(i) = Complex(re, im);
    }
    s.amplitudes.normalize();
    return s;
}

Matrix random_density(std::size_t width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto dim = static_cast<Eigen::Index>(Index{1} << width);
    Matrix g(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const auto [re, im] = gaussian_pair(rng);
            g(r, c) = Complex(re, im);
        }
    }
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

}  // namespace qbound
