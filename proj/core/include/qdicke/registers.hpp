#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdicke/errors.hpp"

namespace qdicke {

using QubitId = std::uint32_t;

/// What a qubit is for. `Block` additionally carries a block index via
/// RegisterMap::block_index.
enum class Role : std::uint8_t {
    System,
    Ancilla,
    Flag,
    Output,
    Selection,
    Block,
};

const char* role_name(Role r);

/// Role assignment plus named register groups (T_1..T_M, A, S, Q, ...).
/// Every qubit has exactly one role; named groups must be pairwise disjoint.
class RegisterMap {
  public:
    RegisterMap() = default;
    explicit RegisterMap(std::uint32_t qubit_count)
        : roles_(qubit_count, Role::Ancilla), block_(qubit_count, -1) {}

    std::uint32_t qubit_count() const { return static_cast<std::uint32_t>(roles_.size()); }

    void set_role(QubitId q, Role r, int block_index = -1);
    Role role(QubitId q) const;
    int block_index(QubitId q) const;

    /// Registers a named group; throws InvalidRegister on overlap with an
    /// existing group or out-of-range ids.
    void add_group(const std::string& name, std::vector<QubitId> qubits);
    const std::vector<QubitId>& group(const std::string& name) const;
    bool has_group(const std::string& name) const;
    const std::map<std::string, std::vector<QubitId>>& groups() const { return groups_; }

    std::vector<QubitId> qubits_with_role(Role r) const;

    /// Non-system, non-output qubits; this is the ancilla count reported in
    /// resource accounting.
    std::uint32_t ancilla_count() const;

  private:
    void check_range(QubitId q) const;

    std::vector<Role> roles_;
    std::vector<int> block_;
    std::map<std::string, std::vector<QubitId>> groups_;
};

}  // namespace qdicke
