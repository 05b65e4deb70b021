#include "qdicke/registers.hpp"

#include <algorithm>
#include <set>

namespace qdicke {

const char* role_name(Role r) {
    switch (r) {
        case Role::System: return "system";
        case Role::Ancilla: return "ancilla";
        case Role::Flag: return "flag";
        case Role::Output: return "output";
        case Role::Selection: return "selection";
        case Role::Block: return "block";
    }
    return "?";
}

void RegisterMap::check_range(QubitId q) const {
    if (q >= roles_.size()) {
        throw InvalidRegister("qubit " + std::to_string(q) + " out of range (have " +
                              std::to_string(roles_.size()) + ")");
    }
}

void RegisterMap::set_role(QubitId q, Role r, int block_index) {
    check_range(q);
    roles_[q] = r;
    block_[q] = block_index;
}

Role RegisterMap::role(QubitId q) const {
    check_range(q);
    return roles_[q];
}

int RegisterMap::block_index(QubitId q) const {
    check_range(q);
    return block_[q];
}

void RegisterMap::add_group(const std::string& name, std::vector<QubitId> qubits) {
    std::set<QubitId> fresh(qubits.begin(), qubits.end());
    if (fresh.size() != qubits.size()) {
        throw InvalidRegister("register group '" + name + "' has duplicate qubits");
    }
    for (QubitId q : qubits) check_range(q);
    for (const auto& [other, members] : groups_) {
        for (QubitId q : members) {
            if (fresh.count(q)) {
                throw InvalidRegister("register groups '" + name + "' and '" + other +
                                      "' overlap at qubit " + std::to_string(q));
            }
        }
    }
    groups_[name] = std::move(qubits);
}

const std::vector<QubitId>& RegisterMap::group(const std::string& name) const {
    auto it = groups_.find(name);
    if (it == groups_.end()) throw InvalidRegister("no register group '" + name + "'");
    return it->second;
}

bool RegisterMap::has_group(const std::string& name) const { return groups_.count(name) > 0; }

std::vector<QubitId> RegisterMap::qubits_with_role(Role r) const {
    std::vector<QubitId> out;
    for (QubitId q = 0; q < roles_.size(); ++q) {
        if (roles_[q] == r) out.push_back(q);
    }
    return out;
}

std::uint32_t RegisterMap::ancilla_count() const {
    std::uint32_t count = 0;
    for (Role r : roles_) {
        if (r != Role::System && r != Role::Output) ++count;
    }
    return count;
}

}  // namespace qdicke
