// engine.cpp -- direct, purified, and copy-model executors plus the
// equal-outcome measurement used by the fidelity-monotonicity checks.
#include "pdqp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "pdqp/errors.hpp"

namespace pdqp {

namespace {

constexpr std::uint64_t field_mask(int width) {
    return width >= 64 ? ~0ull : ((1ull << width) - 1);
}

void ensure_valid(const StepCircuit &circuit) {
    if (circuit.validated) return;
    StepCircuit copy = circuit;
    validate_circuit(copy);
}

bool is_parallel(OracleKind k) {
    return k == OracleKind::ParallelPhase || k == OracleKind::ParallelXor;
}

// Draw one joint basis outcome from |amps|^2 without disturbing the state.
std::uint64_t sample_basis(const std::vector<cdouble> &amps, Rng &rng) {
    double total = 0.0;
    for (const cdouble &a : amps) total += std::norm(a);
    if (total <= 1e-300) throw ZeroProbabilityBranch("state has vanished");
    double r = rng.uniform01() * total;
    double acc = 0.0;
    std::uint64_t last = 0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        double w = std::norm(amps[i]);
        if (w <= 0.0) continue;
        acc += w;
        last = i;
        if (r < acc) return i;
    }
    return last; // rounding tail
}

// Collapse an (offset, width) bit field of a dense amplitude vector in place.
std::pair<std::uint64_t, double> collapse_field(std::vector<cdouble> &amps, int offset, int width,
                                                Rng &rng) {
    std::vector<double> dist = detail::marginal(amps, offset, width);
    double total = std::accumulate(dist.begin(), dist.end(), 0.0);
    std::uint64_t n = rng.sample_discrete(dist, total);
    double kept = dist[n];
    if (kept <= 1e-300) throw ZeroProbabilityBranch("collapse onto vanished outcome");
    const double scale = 1.0 / std::sqrt(kept);
    const std::uint64_t mask = field_mask(width);
    for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
        if (((idx >> offset) & mask) == n)
            amps[idx] *= scale;
        else
            amps[idx] = cdouble(0, 0);
    }
    return {n, kept / total};
}

// A product-form state: registers live in independent tensor factors that
// merge only when an operation spans them. Keeps wide but unentangled
// workspaces (e.g. parallel query rounds over many blocks) simulable.
class FactoredState {
  public:
    FactoredState(const RegisterLayout &workspace, int merge_cap)
        : full_(workspace), merge_cap_(merge_cap) {
        for (const Register &r : workspace.registers()) {
            std::vector<cdouble> amps(1ull << r.qubits, cdouble(0, 0));
            amps[0] = cdouble(1, 0);
            factors_.push_back({RegisterLayout({r}), std::move(amps)});
            where_[r.name] = factors_.size() - 1;
        }
    }

    const RegisterLayout &layout() const { return full_; }

    void apply_gate(const GateApplication &g) {
        std::vector<std::string> regs;
        for (const QubitRef &t : g.targets) regs.push_back(t.reg);
        Factor &f = factors_[merge(regs)];
        std::vector<int> qubits = resolve_targets(f.layout, g.targets);
        const CMatrix &m = g.matrix ? *g.matrix : gate_matrix(g.name);
        detail::apply_matrix_inplace(f.amps, m, qubits);
        f.cdf.clear();
    }

    void apply_oracle(const ProblemInstance &inst, const OracleSpec &spec) {
        for (const OraclePair &p : spec.pairs) {
            Factor &f = factors_[merge({p.index_reg, p.target_reg})];
            if (spec.kind == OracleKind::Phase || spec.kind == OracleKind::ParallelPhase)
                detail::phase_oracle_inplace(f.amps, f.layout, inst, p.index_reg, p.target_reg);
            else
                detail::xor_oracle_inplace(f.amps, f.layout, inst, p.index_reg, p.target_reg);
            f.cdf.clear();
        }
    }

    MeasurementOutcome collapse(const std::string &reg, Rng &rng) {
        Factor &f = factors_[factor_of(reg)];
        auto [n, p] = collapse_field(f.amps, f.layout.offset_of(reg), f.layout.width_of(reg), rng);
        f.cdf.clear();
        return {reg, n, p};
    }

    // One joint basis draw per involved factor; values reported in the listed
    // register order. Nothing is disturbed.
    std::vector<std::uint64_t> sample_regs(const std::vector<std::string> &regs, Rng &rng) {
        std::unordered_map<std::size_t, std::uint64_t> draws;
        std::vector<std::uint64_t> values;
        values.reserve(regs.size());
        for (const std::string &r : regs) {
            std::size_t fi = factor_of(r);
            auto it = draws.find(fi);
            if (it == draws.end()) it = draws.emplace(fi, draw_basis(factors_[fi], rng)).first;
            const Factor &f = factors_[fi];
            values.push_back((it->second >> f.layout.offset_of(r)) & field_mask(f.layout.width_of(r)));
        }
        return values;
    }

    void copy_register(const std::string &src, const std::string &dst) {
        Factor &f = factors_[factor_of(src)];
        const int w = f.layout.width_of(src);
        std::vector<cdouble> chi;
        if (f.layout.registers().size() == 1) {
            chi = f.amps; // the factor is exactly the source register: trivially pure
        } else {
            QuantumState tmp(f.layout, f.amps, /*normalize=*/true);
            double purity = reduced_purity(tmp, src);
            if (purity < 1.0 - 1e-9)
                throw CopyOfEntangledRegister("register '" + src + "' has reduced purity " +
                                              std::to_string(purity));
            // Pure up to tolerance: read the state off the heaviest
            // environment slice.
            const int off = f.layout.offset_of(src);
            const std::uint64_t low_mask = (1ull << off) - 1;
            const std::uint64_t env_dim = f.amps.size() >> w;
            std::vector<double> env_weight(env_dim, 0.0);
            for (std::uint64_t idx = 0; idx < f.amps.size(); ++idx) {
                std::uint64_t env = (idx & low_mask) | ((idx >> (off + w)) << off);
                env_weight[env] += std::norm(f.amps[idx]);
            }
            std::uint64_t best =
                std::max_element(env_weight.begin(), env_weight.end()) - env_weight.begin();
            const std::uint64_t blow = best & low_mask;
            const std::uint64_t bhigh = best >> off;
            chi.resize(1ull << w);
            double norm2 = 0.0;
            for (std::uint64_t a = 0; a < chi.size(); ++a) {
                chi[a] = f.amps[blow | (a << off) | (bhigh << (off + w))];
                norm2 += std::norm(chi[a]);
            }
            if (norm2 <= 1e-300) throw ZeroProbabilityBranch("source register has vanished");
            const double scale = 1.0 / std::sqrt(norm2);
            for (cdouble &c : chi) c *= scale;
        }
        full_.append({dst, w});
        factors_.push_back({RegisterLayout({{dst, w}}), std::move(chi)});
        where_[dst] = factors_.size() - 1;
    }

    // Terminal joint measurement of every register, packed by the full
    // layout's offsets. Only meaningful for workspaces that fit 64 bits.
    std::uint64_t measure_all(Rng &rng) {
        if (full_.total_qubits() > 64)
            throw QubitBudgetExceeded("final measurement outcome does not fit 64 bits");
        std::uint64_t packed = 0;
        for (Factor &f : factors_) {
            std::uint64_t v = draw_basis(f, rng);
            for (const Register &r : f.layout.registers()) {
                std::uint64_t field = (v >> f.layout.offset_of(r.name)) & field_mask(r.qubits);
                packed |= field << full_.offset_of(r.name);
            }
        }
        return packed;
    }

    QuantumState join(int cap) const {
        if (full_.total_qubits() > cap)
            throw QubitBudgetExceeded("joined state needs " + std::to_string(full_.total_qubits()) +
                                      " qubits (cap " + std::to_string(cap) + ")");
        QuantumState out(full_);
        auto &dst = out.mutable_amplitudes();
        std::fill(dst.begin(), dst.end(), cdouble(0, 0));
        for (std::uint64_t idx = 0; idx < dst.size(); ++idx) {
            cdouble v(1, 0);
            for (const Factor &f : factors_) {
                std::uint64_t local = 0;
                for (const Register &r : f.layout.registers()) {
                    std::uint64_t field = (idx >> full_.offset_of(r.name)) & field_mask(r.qubits);
                    local |= field << f.layout.offset_of(r.name);
                }
                v *= f.amps[local];
                if (v == cdouble(0, 0)) break;
            }
            dst[idx] = v;
        }
        return out;
    }

  private:
    struct Factor {
        RegisterLayout layout;
        std::vector<cdouble> amps;
        std::vector<double> cdf; // lazy |amps|^2 prefix sums; cleared on mutation
    };

    // Joint basis draw via the factor's cached CDF, so a run with many
    // repeated sample steps pays O(dim) once and O(log dim) per draw.
    static std::uint64_t draw_basis(Factor &f, Rng &rng) {
        if (f.cdf.size() != f.amps.size()) {
            f.cdf.resize(f.amps.size());
            double acc = 0.0;
            for (std::uint64_t i = 0; i < f.amps.size(); ++i) {
                acc += std::norm(f.amps[i]);
                f.cdf[i] = acc;
            }
        }
        const double total = f.cdf.back();
        if (total <= 1e-300) throw ZeroProbabilityBranch("state has vanished");
        const double r = rng.uniform01() * total;
        auto it = std::upper_bound(f.cdf.begin(), f.cdf.end(), r);
        if (it == f.cdf.end()) --it;
        return static_cast<std::uint64_t>(it - f.cdf.begin());
    }

    std::size_t factor_of(const std::string &reg) const {
        auto it = where_.find(reg);
        if (it == where_.end()) throw UnknownRegister("no register named '" + reg + "'");
        return it->second;
    }

    // Merge the factors holding the named registers into one; returns its index.
    std::size_t merge(const std::vector<std::string> &regs) {
        std::vector<std::size_t> idx;
        for (const std::string &r : regs) {
            std::size_t fi = factor_of(r);
            if (std::find(idx.begin(), idx.end(), fi) == idx.end()) idx.push_back(fi);
        }
        if (idx.size() == 1) return idx.front();
        std::sort(idx.begin(), idx.end());
        int total = 0;
        for (std::size_t fi : idx) total += factors_[fi].layout.total_qubits();
        if (total > merge_cap_)
            throw QubitBudgetExceeded("merging entangles " + std::to_string(total) +
                                      " qubits (cap " + std::to_string(merge_cap_) + ")");
        Factor merged = std::move(factors_[idx.front()]);
        for (std::size_t k = 1; k < idx.size(); ++k) {
            Factor &other = factors_[idx[k]];
            std::vector<cdouble> amps(merged.amps.size() * other.amps.size());
            for (std::uint64_t hi = 0; hi < other.amps.size(); ++hi)
                for (std::uint64_t lo = 0; lo < merged.amps.size(); ++lo)
                    amps[(hi << merged.layout.total_qubits()) | lo] =
                        merged.amps[lo] * other.amps[hi];
            for (const Register &r : other.layout.registers()) merged.layout.append(r);
            merged.amps = std::move(amps);
        }
        merged.cdf.clear();
        // Compact: drop the absorbed factors, keep the merged one in place.
        factors_[idx.front()] = std::move(merged);
        for (std::size_t k = idx.size(); k-- > 1;)
            factors_.erase(factors_.begin() + static_cast<std::ptrdiff_t>(idx[k]));
        where_.clear();
        for (std::size_t fi = 0; fi < factors_.size(); ++fi)
            for (const Register &r : factors_[fi].layout.registers()) where_[r.name] = fi;
        return factor_of(regs.front());
    }

    RegisterLayout full_;
    std::vector<Factor> factors_;
    std::unordered_map<std::string, std::size_t> where_;
    int merge_cap_;
};

RunResult run_factored(const StepCircuit &circuit, const ProblemInstance *inst,
                       const RunOptions &options, Rng &rng, bool allow_sample, bool allow_copy,
                       std::optional<QuantumState> *final_state) {
    ensure_valid(circuit);
    FactoredState st(circuit.workspace, options.direct_qubit_cap);
    RunResult out;
    bool parallel_used = false;
    for (const Step &step : circuit.steps) {
        for (const GateApplication &g : step.gates) st.apply_gate(g);
        if (step.collapse) out.transcript.collapses.push_back(st.collapse(*step.collapse, rng));
        switch (step.kind) {
        case StepKind::Plain:
            break;
        case StepKind::Sample:
            if (!allow_sample)
                throw MalformedCircuit("sample steps are not available in the copy model");
            out.transcript.samples.push_back(st.sample_regs(step.sample.registers, rng));
            ++out.transcript.samples_used;
            break;
        case StepKind::Query: {
            if (!inst) throw InvalidParameters("query step requires a problem instance");
            if (is_parallel(step.oracle.kind)) {
                if (parallel_used)
                    throw SecondParallelQuery("only one parallel query round per run");
                parallel_used = true;
            }
            st.apply_oracle(*inst, step.oracle);
            out.transcript.queries_used += query_cost(step.oracle);
            break;
        }
        case StepKind::Copy:
            if (!allow_copy)
                throw MalformedCircuit("copy steps require the copy-model executor");
            st.copy_register(step.copy.source, step.copy.dest);
            ++out.transcript.copies_used;
            break;
        }
    }
    if (options.final_measurement) out.transcript.final_outcome = st.measure_all(rng);
    if (final_state) *final_state = st.join(options.direct_qubit_cap);
    return out;
}

} // namespace

RunResult run_direct(const StepCircuit &circuit, const ProblemInstance *inst,
                     const RunOptions &options, Rng &rng) {
    return run_factored(circuit, inst, options, rng, /*allow_sample=*/true, /*allow_copy=*/false,
                        nullptr);
}

TracedRun run_direct_traced(const StepCircuit &circuit, const ProblemInstance *inst,
                            const RunOptions &options, Rng &rng) {
    std::optional<QuantumState> fs;
    RunResult r = run_factored(circuit, inst, options, rng, true, false, &fs);
    return TracedRun{std::move(r), std::move(*fs)};
}

RunResult run_cbqp(const StepCircuit &circuit, const ProblemInstance *inst,
                   const RunOptions &options, Rng &rng) {
    return run_factored(circuit, inst, options, rng, /*allow_sample=*/false, /*allow_copy=*/true,
                        nullptr);
}

RunResult run_purified(const StepCircuit &circuit, const ProblemInstance *inst,
                       const RunOptions &options, Rng &rng) {
    ensure_valid(circuit);
    const RegisterLayout &ws = circuit.workspace;
    const int l = ws.total_qubits();
    const int R = static_cast<int>(circuit.steps.size());
    if (R == 0) throw MalformedCircuit("purified execution needs at least one step");
    for (const Step &s : circuit.steps)
        if (s.kind != StepKind::Sample && s.kind != StepKind::Query)
            throw MalformedCircuit("purified execution requires every step to sample or query");
    if (l * R > options.qubit_cap)
        throw QubitBudgetExceeded("purified run needs " + std::to_string(l * R) + " qubits (cap " +
                                  std::to_string(options.qubit_cap) + ")");

    // Copy c of the workspace occupies qubits [c*l, (c+1)*l); copy c retires
    // at step c. Sample-step copies are measured after the loop.
    std::vector<cdouble> amps(1ull << (l * R), cdouble(0, 0));
    amps[0] = cdouble(1, 0);
    RunResult out;
    bool parallel_used = false;
    std::vector<std::pair<int, const SampleSpec *>> deferred;

    for (int s = 0; s < R; ++s) {
        const Step &step = circuit.steps[s];
        const int active = R - s;
        for (const GateApplication &g : step.gates) {
            std::vector<int> qubits = resolve_targets(ws, g.targets);
            const CMatrix &m = g.matrix ? *g.matrix : gate_matrix(g.name);
            for (int c = s; c < R; ++c) {
                std::vector<int> shifted = qubits;
                for (int &q : shifted) q += c * l;
                detail::apply_matrix_inplace(amps, m, shifted);
            }
        }
        if (step.collapse) {
            const std::string &mreg = *step.collapse;
            const int off = ws.offset_of(mreg);
            const int w = ws.width_of(mreg);
            const std::uint64_t K = 1ull << w;
            const std::uint64_t mask = K - 1;
            // a: outcome distribution on the first active copy.
            // q: mass where every active copy agrees on the outcome.
            std::vector<double> a(K, 0.0), q(K, 0.0);
            for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
                double m2 = std::norm(amps[idx]);
                if (m2 == 0.0) continue;
                std::uint64_t first = (idx >> (s * l + off)) & mask;
                a[first] += m2;
                bool equal = true;
                for (int c = s + 1; c < R && equal; ++c)
                    equal = ((idx >> (c * l + off)) & mask) == first;
                if (equal) q[first] += m2;
            }
            std::vector<double> p(K, 0.0);
            double sum = 0.0;
            for (std::uint64_t n = 0; n < K; ++n) {
                double d = 0.0;
                if (options.force_unit_reweights)
                    d = 1.0;
                else if (a[n] > options.amp_floor)
                    d = std::pow(a[n], -static_cast<double>(active - 1));
                p[n] = d * q[n];
                sum += p[n];
            }
            if (options.force_unit_reweights) {
                if (sum <= 1e-300) throw ZeroProbabilityBranch("all outcomes vanished");
            } else if (std::abs(sum - 1.0) > options.reweight_tolerance) {
                throw ReweightNotStochastic("reweighted outcome probabilities sum to " +
                                            std::to_string(sum));
            }
            if (options.audit_reweights) {
                ReweightAudit row;
                row.step = s;
                row.stochastic_sum = sum;
                for (std::uint64_t n = 0; n < K; ++n)
                    row.max_deviation = std::max(row.max_deviation, std::abs(p[n] / sum - a[n]));
                out.audits.push_back(row);
            }
            std::uint64_t n = rng.sample_discrete(p, sum);
            if (q[n] <= 1e-300) throw ZeroProbabilityBranch("collapse onto vanished outcome");
            const double scale = 1.0 / std::sqrt(q[n]);
            for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
                bool keep = true;
                for (int c = s; c < R && keep; ++c)
                    keep = ((idx >> (c * l + off)) & mask) == n;
                if (keep)
                    amps[idx] *= scale;
                else
                    amps[idx] = cdouble(0, 0);
            }
            out.transcript.collapses.push_back({mreg, n, p[n] / sum});
        }
        if (step.kind == StepKind::Query) {
            if (!inst) throw InvalidParameters("query step requires a problem instance");
            if (is_parallel(step.oracle.kind)) {
                if (parallel_used)
                    throw SecondParallelQuery("only one parallel query round per run");
                parallel_used = true;
            }
            for (int c = s; c < R; ++c) {
                for (const OraclePair &pr : step.oracle.pairs) {
                    if (step.oracle.kind == OracleKind::Phase ||
                        step.oracle.kind == OracleKind::ParallelPhase)
                        detail::phase_oracle_inplace(amps, ws, *inst, pr.index_reg, pr.target_reg,
                                                     c * l);
                    else
                        detail::xor_oracle_inplace(amps, ws, *inst, pr.index_reg, pr.target_reg,
                                                   c * l);
                }
            }
            out.transcript.queries_used += query_cost(step.oracle);
        } else { // Sample: the retiring copy carries this step's state to the end
            deferred.push_back({s, &step.sample});
            ++out.transcript.samples_used;
        }
    }

    for (const auto &[c, spec] : deferred) {
        std::vector<std::uint64_t> values;
        values.reserve(spec->registers.size());
        for (const std::string &r : spec->registers) {
            auto [n, prob] = collapse_field(amps, c * l + ws.offset_of(r), ws.width_of(r), rng);
            values.push_back(n);
        }
        out.transcript.samples.push_back(std::move(values));
    }
    if (options.final_measurement) {
        std::uint64_t packed = 0;
        for (const Register &r : ws.registers()) {
            auto [n, prob] =
                collapse_field(amps, (R - 1) * l + ws.offset_of(r.name), r.qubits, rng);
            packed |= n << ws.offset_of(r.name);
        }
        out.transcript.final_outcome = packed;
    }
    return out;
}

QuantumState state_after(const StepCircuit &circuit, const ProblemInstance *inst, int steps,
                         const RunOptions &options) {
    ensure_valid(circuit);
    const int upto = steps < 0 ? static_cast<int>(circuit.steps.size())
                               : std::min<int>(steps, static_cast<int>(circuit.steps.size()));
    FactoredState st(circuit.workspace, options.direct_qubit_cap);
    bool parallel_used = false;
    for (int s = 0; s < upto; ++s) {
        const Step &step = circuit.steps[s];
        for (const GateApplication &g : step.gates) st.apply_gate(g);
        if (step.collapse)
            throw MalformedCircuit("state_after requires a measurement-free prefix");
        if (step.kind == StepKind::Query) {
            if (!inst) throw InvalidParameters("query step requires a problem instance");
            if (is_parallel(step.oracle.kind)) {
                if (parallel_used)
                    throw SecondParallelQuery("only one parallel query round per run");
                parallel_used = true;
            }
            st.apply_oracle(*inst, step.oracle);
        } else if (step.kind == StepKind::Copy) {
            throw MalformedCircuit("state_after does not execute copy steps");
        } // Sample steps do not disturb the state.
    }
    return st.join(options.direct_qubit_cap);
}

// ---- equal-outcome measurements -----------------------------------------------

namespace {

std::vector<double> measure_reweights(const EqualOutcomeMeasure &m,
                                      const StateEnsemble &reference) {
    if (m.copies < 1) throw InvalidParameters("measure needs at least one copy");
    const int w = m.workspace.width_of(m.measured_register);
    const std::uint64_t K = 1ull << w;
    if (!m.reweights.empty()) {
        if (m.reweights.size() != K)
            throw InvalidParameters("reweight vector length does not match the outcome count");
        for (double d : m.reweights)
            if (d < 1.0) throw InvalidParameters("reweights must be at least 1");
        return m.reweights;
    }
    if (m.copies == 1) return std::vector<double>(K, 1.0);
    const double total = reference.total_weight();
    if (total <= 0.0) throw InvalidParameters("reference ensemble has no weight");
    const int l = m.workspace.total_qubits();
    const int off = m.workspace.offset_of(m.measured_register);
    const std::uint64_t dim = 1ull << (l * m.copies);
    const std::uint64_t mask = K - 1;
    std::vector<double> a(K, 0.0);
    for (const WeightedState &ws : reference.members) {
        if (ws.state.amplitudes().size() != dim)
            throw DimensionMismatch("ensemble member does not span the declared copies");
        const auto &amps = ws.state.amplitudes();
        for (std::uint64_t idx = 0; idx < dim; ++idx)
            a[(idx >> off) & mask] += (ws.weight / total) * std::norm(amps[idx]);
    }
    std::vector<double> d(K, 0.0);
    for (std::uint64_t n = 0; n < K; ++n)
        if (a[n] > 1e-12) d[n] = std::pow(a[n], -static_cast<double>(m.copies - 1));
    return d;
}

} // namespace

StateEnsemble apply_equal_outcome_measure(const StateEnsemble &ensemble,
                                          const EqualOutcomeMeasure &measure,
                                          const StateEnsemble &reference) {
    const std::vector<double> d = measure_reweights(measure, reference);
    const int l = measure.workspace.total_qubits();
    const int off = measure.workspace.offset_of(measure.measured_register);
    const int w = measure.workspace.width_of(measure.measured_register);
    const std::uint64_t K = 1ull << w;
    const std::uint64_t mask = K - 1;
    const std::uint64_t dim = 1ull << (l * measure.copies);
    StateEnsemble out;
    for (const WeightedState &member : ensemble.members) {
        if (member.state.amplitudes().size() != dim)
            throw DimensionMismatch("ensemble member does not span the declared copies");
        const auto &amps = member.state.amplitudes();
        for (std::uint64_t n = 0; n < K; ++n) {
            if (d[n] == 0.0) continue;
            double q = 0.0;
            for (std::uint64_t idx = 0; idx < dim; ++idx) {
                if (amps[idx] == cdouble(0, 0)) continue;
                bool equal = true;
                for (int c = 0; c < measure.copies && equal; ++c)
                    equal = ((idx >> (c * l + off)) & mask) == n;
                if (equal) q += std::norm(amps[idx]);
            }
            if (q <= 1e-300) continue;
            std::vector<cdouble> proj(dim, cdouble(0, 0));
            const double scale = 1.0 / std::sqrt(q);
            for (std::uint64_t idx = 0; idx < dim; ++idx) {
                if (amps[idx] == cdouble(0, 0)) continue;
                bool equal = true;
                for (int c = 0; c < measure.copies && equal; ++c)
                    equal = ((idx >> (c * l + off)) & mask) == n;
                if (equal) proj[idx] = amps[idx] * scale;
            }
            out.members.push_back(
                {member.weight * d[n] * q,
                 QuantumState(member.state.layout(), std::move(proj), /*normalize=*/true)});
        }
    }
    return out;
}

MonotonePair check_fidelity_monotone(const StateEnsemble &a, const StateEnsemble &b,
                                     const EqualOutcomeMeasure &measure) {
    MonotonePair pair;
    pair.before = fidelity(a, b);
    StateEnsemble pa = apply_equal_outcome_measure(a, measure, a);
    StateEnsemble pb = apply_equal_outcome_measure(b, measure, a);
    pair.after = fidelity(pa, pb);
    return pair;
}

} // namespace pdqp
