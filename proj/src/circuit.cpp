// circuit.cpp -- structural validation and JSON round trip for step circuits.
#include "pdqp/circuit.hpp"

#include <json.hpp>
#include <set>

#include "pdqp/errors.hpp"

namespace pdqp {

using njson = nlohmann::ordered_json;

int count_queries(const StepCircuit &circuit) {
    int q = 0;
    for (const Step &s : circuit.steps)
        if (s.kind == StepKind::Query) q += query_cost(s.oracle);
    return q;
}

int count_samples(const StepCircuit &circuit) {
    int p = 0;
    for (const Step &s : circuit.steps)
        if (s.kind == StepKind::Sample || s.kind == StepKind::Copy) ++p;
    return p;
}

void validate_circuit(StepCircuit &circuit) {
    if (circuit.workspace.registers().empty())
        throw MalformedCircuit("circuit declares no registers");
    RegisterLayout scope = circuit.workspace; // copy destinations join as we go
    bool has_sample = false, has_copy = false;
    for (std::size_t si = 0; si < circuit.steps.size(); ++si) {
        const Step &step = circuit.steps[si];
        const std::string at = " (step " + std::to_string(si) + ")";
        for (const GateApplication &g : step.gates) {
            resolve_targets(scope, g.targets); // throws on unknown register / bad bit
            if (g.matrix) {
                std::uint64_t want = 1ull << g.targets.size();
                if (g.matrix->dim != want)
                    throw DimensionMismatch("matrix size does not match target count" + at);
                if (!is_unitary(*g.matrix)) throw NonUnitaryMatrix("explicit gate matrix" + at);
            } else if (!is_named_gate(g.name)) {
                throw MalformedCircuit("unknown gate '" + g.name + "'" + at);
            }
        }
        if (step.collapse) scope.offset_of(*step.collapse);
        switch (step.kind) {
        case StepKind::Plain:
            break;
        case StepKind::Sample: {
            has_sample = true;
            if (step.sample.registers.empty())
                throw MalformedCircuit("sample step lists no registers" + at);
            std::set<std::string> seen;
            for (const std::string &r : step.sample.registers) {
                scope.offset_of(r);
                if (!seen.insert(r).second)
                    throw MalformedCircuit("sample step repeats register '" + r + "'" + at);
            }
            break;
        }
        case StepKind::Query: {
            query_cost(step.oracle);
            std::set<std::string> used;
            for (const OraclePair &p : step.oracle.pairs) {
                scope.offset_of(p.index_reg);
                scope.offset_of(p.target_reg);
                if (p.index_reg == p.target_reg)
                    throw MalformedCircuit("oracle pair reuses one register" + at);
                if (!used.insert(p.index_reg).second || !used.insert(p.target_reg).second)
                    throw MalformedCircuit("parallel oracle pairs must be disjoint" + at);
            }
            break;
        }
        case StepKind::Copy: {
            has_copy = true;
            int width = scope.width_of(step.copy.source);
            bool exists = true;
            try {
                scope.offset_of(step.copy.dest);
            } catch (const UnknownRegister &) {
                exists = false;
            }
            if (exists)
                throw MalformedCircuit("copy destination '" + step.copy.dest + "' already exists" +
                                       at);
            scope.append({step.copy.dest, width});
            break;
        }
        }
    }
    if (has_sample && has_copy)
        throw MalformedCircuit("a circuit may not mix sample steps and copy steps");
    if (circuit.declared_queries != count_queries(circuit))
        throw MalformedCircuit("declared query count does not match the steps");
    if (circuit.declared_samples != count_samples(circuit))
        throw MalformedCircuit("declared sample count does not match the steps");
    circuit.validated = true;
}

namespace {

njson targets_to_json(const std::vector<QubitRef> &targets) {
    njson arr = njson::array();
    for (const QubitRef &t : targets) arr.push_back(njson::array({t.reg, t.bit}));
    return arr;
}

std::vector<QubitRef> targets_from_json(const njson &arr) {
    std::vector<QubitRef> out;
    for (const auto &e : arr) out.push_back({e.at(0).get<std::string>(), e.at(1).get<int>()});
    return out;
}

njson gate_to_json(const GateApplication &g) {
    njson j;
    j["gate"] = g.name;
    j["targets"] = targets_to_json(g.targets);
    if (g.matrix) {
        njson m = njson::array();
        for (std::uint64_t r = 0; r < g.matrix->dim; ++r)
            for (std::uint64_t c = 0; c < g.matrix->dim; ++c) {
                const cdouble &v = (*g.matrix)(r, c);
                m.push_back(njson::array({v.real(), v.imag()}));
            }
        j["matrix"] = std::move(m);
    }
    return j;
}

GateApplication gate_from_json(const njson &j) {
    GateApplication g;
    g.name = j.at("gate").get<std::string>();
    g.targets = targets_from_json(j.at("targets"));
    if (j.contains("matrix")) {
        std::uint64_t dim = 1ull << g.targets.size();
        const njson &m = j.at("matrix");
        if (m.size() != dim * dim) throw MalformedCircuit("matrix entry count mismatch");
        CMatrix mat(dim);
        std::size_t k = 0;
        for (std::uint64_t r = 0; r < dim; ++r)
            for (std::uint64_t c = 0; c < dim; ++c, ++k)
                mat(r, c) = cdouble(m[k].at(0).get<double>(), m[k].at(1).get<double>());
        g.matrix = std::move(mat);
    }
    return g;
}

} // namespace

std::string circuit_to_json(const StepCircuit &circuit) {
    njson j;
    njson regs = njson::array();
    for (const Register &r : circuit.workspace.registers())
        regs.push_back(njson::array({r.name, r.qubits}));
    j["registers"] = std::move(regs);
    njson steps = njson::array();
    for (const Step &s : circuit.steps) {
        njson js;
        njson gates = njson::array();
        for (const GateApplication &g : s.gates) gates.push_back(gate_to_json(g));
        js["gates"] = std::move(gates);
        if (s.collapse) js["collapse"] = *s.collapse;
        switch (s.kind) {
        case StepKind::Plain:
            js["kind"] = {{"type", "plain"}};
            break;
        case StepKind::Sample:
            js["kind"] = {{"type", "sample"}, {"registers", s.sample.registers}};
            break;
        case StepKind::Query: {
            njson pairs = njson::array();
            for (const OraclePair &p : s.oracle.pairs)
                pairs.push_back(njson::array({p.index_reg, p.target_reg}));
            js["kind"] = {{"type", "query"},
                          {"oracle", to_string(s.oracle.kind)},
                          {"pairs", std::move(pairs)}};
            break;
        }
        case StepKind::Copy:
            js["kind"] = {{"type", "copy"}, {"source", s.copy.source}, {"dest", s.copy.dest}};
            break;
        }
        steps.push_back(std::move(js));
    }
    j["steps"] = std::move(steps);
    j["queries"] = circuit.declared_queries;
    j["samples"] = circuit.declared_samples;
    return j.dump();
}

StepCircuit circuit_from_json(const std::string &text) {
    njson j = njson::parse(text, nullptr, true);
    StepCircuit c;
    for (const auto &r : j.at("registers"))
        c.workspace.append({r.at(0).get<std::string>(), r.at(1).get<int>()});
    for (const auto &js : j.at("steps")) {
        Step s;
        for (const auto &jg : js.at("gates")) s.gates.push_back(gate_from_json(jg));
        if (js.contains("collapse")) s.collapse = js.at("collapse").get<std::string>();
        const njson &kind = js.at("kind");
        const std::string type = kind.at("type").get<std::string>();
        if (type == "plain") {
            s.kind = StepKind::Plain;
        } else if (type == "sample") {
            s.kind = StepKind::Sample;
            s.sample.registers = kind.at("registers").get<std::vector<std::string>>();
        } else if (type == "query") {
            s.kind = StepKind::Query;
            s.oracle.kind = oracle_from_string(kind.at("oracle").get<std::string>());
            for (const auto &p : kind.at("pairs"))
                s.oracle.pairs.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
        } else if (type == "copy") {
            s.kind = StepKind::Copy;
            s.copy.source = kind.at("source").get<std::string>();
            s.copy.dest = kind.at("dest").get<std::string>();
        } else {
            throw MalformedCircuit("unknown step kind '" + type + "'");
        }
        c.steps.push_back(std::move(s));
    }
    c.declared_queries = j.at("queries").get<int>();
    c.declared_samples = j.at("samples").get<int>();
    validate_circuit(c);
    return c;
}

} // namespace pdqp
