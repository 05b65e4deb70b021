#include "qdicke/serialize.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "qdicke/errors.hpp"

namespace qdicke {

namespace {

using json = nlohmann::ordered_json;

json complex_to_json(const cplx& c) { return json::array({c.real(), c.imag()}); }
cplx complex_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json gate_to_json(const Gate& g) {
    json j;
    std::visit(
        [&](const auto& gate) {
            using T = std::decay_t<decltype(gate)>;
            if constexpr (std::is_same_v<T, SingleQubit>) {
                j["gate"] = "1q";
                j["target"] = gate.target;
                j["u"] = json::array({complex_to_json(gate.u[0]), complex_to_json(gate.u[1]),
                                      complex_to_json(gate.u[2]), complex_to_json(gate.u[3])});
            } else if constexpr (std::is_same_v<T, GlobalCZ>) {
                j["gate"] = "gcz";
                j["support"] = gate.support;
            } else if constexpr (std::is_same_v<T, FanOut>) {
                j["gate"] = "fanout";
                j["control"] = gate.control;
                j["targets"] = gate.targets;
            } else if constexpr (std::is_same_v<T, MultiToffoli>) {
                j["gate"] = "toffoli";
                json controls = json::array();
                for (const auto& c : gate.controls) {
                    controls.push_back(json::array({c.qubit, c.positive ? 1 : -1}));
                }
                j["controls"] = controls;
                j["target"] = gate.target;
            } else if constexpr (std::is_same_v<T, ProductReflection>) {
                j["gate"] = "reflection";
                json support = json::array();
                for (const auto& f : gate.support) {
                    support.push_back(json::array(
                        {f.qubit, complex_to_json(f.state[0]), complex_to_json(f.state[1])}));
                }
                j["support"] = support;
            } else if constexpr (std::is_same_v<T, WeightOracle>) {
                j["gate"] = "oracle";
                j["kind"] = gate.kind == WeightOracle::Kind::BitFlip ? "flip" : "phase";
                j["support"] = gate.support;
                j["k"] = gate.k;
                if (gate.kind == WeightOracle::Kind::BitFlip) j["target"] = gate.target;
                j["depth"] = gate.declared_depth;
            }
        },
        g);
    return j;
}

Gate gate_from_json(const json& j) {
    const std::string kind = j.at("gate").get<std::string>();
    if (kind == "1q") {
        SingleQubit g;
        g.target = j.at("target").get<QubitId>();
        const json& u = j.at("u");
        for (int i = 0; i < 4; ++i) g.u[i] = complex_from_json(u.at(i));
        return g;
    }
    if (kind == "gcz") {
        return GlobalCZ{j.at("support").get<std::vector<QubitId>>()};
    }
    if (kind == "fanout") {
        return FanOut{j.at("control").get<QubitId>(), j.at("targets").get<std::vector<QubitId>>()};
    }
    if (kind == "toffoli") {
        MultiToffoli g;
        for (const json& c : j.at("controls")) {
            g.controls.push_back({c.at(0).get<QubitId>(), c.at(1).get<int>() > 0});
        }
        g.target = j.at("target").get<QubitId>();
        return g;
    }
    if (kind == "reflection") {
        ProductReflection g;
        for (const json& f : j.at("support")) {
            g.support.push_back(
                {f.at(0).get<QubitId>(), {complex_from_json(f.at(1)), complex_from_json(f.at(2))}});
        }
        return g;
    }
    if (kind == "oracle") {
        WeightOracle g;
        g.kind = j.at("kind").get<std::string>() == "flip" ? WeightOracle::Kind::BitFlip
                                                           : WeightOracle::Kind::Phase;
        g.support = j.at("support").get<std::vector<QubitId>>();
        g.k = j.at("k").get<int>();
        g.target = g.kind == WeightOracle::Kind::BitFlip ? j.at("target").get<QubitId>() : 0;
        g.declared_depth = j.at("depth").get<int>();
        return g;
    }
    throw Error("unknown gate kind '" + kind + "'");
}

}  // namespace

std::string circuit_to_json(const Circuit& c) {
    json j;
    j["n"] = c.qubit_count;
    j["model"] = model_name(c.model);
    json roles = json::array();
    for (QubitId q = 0; q < c.qubit_count; ++q) {
        const Role r = c.registers.qubit_count() == c.qubit_count ? c.registers.role(q)
                                                                  : Role::Ancilla;
        if (r == Role::Block) {
            roles.push_back(std::string("block:") +
                            std::to_string(c.registers.block_index(q)));
        } else {
            roles.push_back(role_name(r));
        }
    }
    json groups;
    for (const auto& [name, members] : c.registers.groups()) groups[name] = members;
    j["registers"] = json{{"roles", roles}, {"groups", groups}};
    json layers = json::array();
    for (const auto& layer : c.layers) {
        json jl = json::array();
        for (const Gate& g : layer.gates) jl.push_back(gate_to_json(g));
        layers.push_back(jl);
    }
    j["layers"] = layers;
    return j.dump(2);
}

Circuit circuit_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    Circuit c;
    c.qubit_count = j.at("n").get<std::uint32_t>();
    c.model = j.at("model").get<std::string>() == "qac0f" ? Model::QAC0F : Model::QAC0;
    c.registers = RegisterMap(c.qubit_count);
    if (j.contains("registers")) {
        const json& regs = j.at("registers");
        if (regs.contains("roles")) {
            const json& roles = regs.at("roles");
            for (QubitId q = 0; q < c.qubit_count && q < roles.size(); ++q) {
                const std::string name = roles.at(q).get<std::string>();
                if (name == "system") c.registers.set_role(q, Role::System);
                else if (name == "flag") c.registers.set_role(q, Role::Flag);
                else if (name == "output") c.registers.set_role(q, Role::Output);
                else if (name == "selection") c.registers.set_role(q, Role::Selection);
                else if (name.rfind("block:", 0) == 0) {
                    c.registers.set_role(q, Role::Block, std::stoi(name.substr(6)));
                } else c.registers.set_role(q, Role::Ancilla);
            }
        }
        if (regs.contains("groups")) {
            for (const auto& [name, members] : regs.at("groups").items()) {
                c.registers.add_group(name, members.get<std::vector<QubitId>>());
            }
        }
    }
    for (const json& jl : j.at("layers")) {
        Layer layer;
        for (const json& jg : jl) layer.gates.push_back(gate_from_json(jg));
        c.layers.push_back(std::move(layer));
    }
    validate_circuit(c);
    return c;
}

namespace {

std::string format_complex(const cplx& c) {
    std::ostringstream s;
    s << c.real();
    if (c.imag() >= 0) s << "+";
    s << c.imag() << "j";
    return s.str();
}

}  // namespace

std::string circuit_to_gatelist(const Circuit& c) {
    std::ostringstream out;
    bool first_layer = true;
    for (const auto& layer : c.layers) {
        if (!first_layer) out << "---\n";
        first_layer = false;
        for (const Gate& g : layer.gates) {
            if (const auto* sq = std::get_if<SingleQubit>(&g)) {
                out << "U1Q " << sq->target << " [[" << format_complex(sq->u[0]) << ","
                    << format_complex(sq->u[1]) << "],[" << format_complex(sq->u[2]) << ","
                    << format_complex(sq->u[3]) << "]]\n";
            } else if (const auto* cz = std::get_if<GlobalCZ>(&g)) {
                out << "GCZ";
                for (QubitId q : cz->support) out << " " << q;
                out << "\n";
            } else if (const auto* f = std::get_if<FanOut>(&g)) {
                out << "FANOUT " << f->control << " ->";
                for (QubitId q : f->targets) out << " " << q;
                out << "\n";
            } else if (const auto* w = std::get_if<WeightOracle>(&g)) {
                out << "ORACLE " << (w->kind == WeightOracle::Kind::BitFlip ? "flip" : "phase")
                    << " k=" << w->k;
                if (w->kind == WeightOracle::Kind::BitFlip) out << " -> " << w->target;
                out << " on";
                for (QubitId q : w->support) out << " " << q;
                out << "\n";
            } else {
                throw MacroNotExpanded("gate-list export requires an expanded circuit");
            }
        }
    }
    return out.str();
}

std::string family_to_json(const SubsetFamily& f) {
    json j;
    j["n"] = f.n;
    j["t"] = f.t;
    j["seed"] = f.seed;
    json subsets = json::array();
    for (SubsetMask m : f.subsets) {
        json members = json::array();
        for (std::uint32_t q = 0; q < f.n; ++q) {
            if ((m >> q) & 1u) members.push_back(q);
        }
        subsets.push_back(members);
    }
    j["subsets"] = subsets;
    return j.dump(2);
}

SubsetFamily family_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    SubsetFamily f;
    f.n = j.at("n").get<std::uint32_t>();
    f.t = j.at("t").get<int>();
    f.seed = j.at("seed").get<std::uint64_t>();
    for (const json& members : j.at("subsets")) {
        SubsetMask m = 0;
        for (const json& q : members) m |= std::uint64_t(1) << q.get<std::uint32_t>();
        f.subsets.push_back(m);
    }
    if (static_cast<int>(f.subsets.size()) != f.t) {
        throw ConfigMismatch("family JSON: t does not match subset count");
    }
    return f;
}

}  // namespace qdicke
