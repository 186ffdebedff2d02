// layout.hpp — Composite spin⊗boson Hilbert space and its basis codec.
//
// Basis ordering is fixed so serialized states are portable across runs:
// spins of group 0 occupy the lowest bits (site j of group 0 is bit j),
// then group 1, and so on; boson modes follow in declaration order as
// mixed-radix digits, first declared mode least significant.  Spin value
// 1 means "excited" (|1⟩ = |↓⟩, σz eigenvalue −1).

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace coopdyn {

struct SystemSpec;

struct BosonGroupLayout {
    int modes = 0;  // L
    int cutoff = 0; // d, occupations 0..d-1
};

// Full occupation record of one basis state.
struct BasisConfig {
    std::vector<std::uint8_t> spins; // flat site order, one entry per spin
    std::vector<int> modes;          // flat mode order, one entry per mode
};

class SpaceLayout {
public:
    SpaceLayout() = default;
    // Throws ConfigError for cutoff < 2 or negative group size and
    // CapacityError when the product dimension exceeds `budget`.
    SpaceLayout(std::vector<int> spin_counts, std::vector<BosonGroupLayout> boson_groups,
                std::size_t budget = std::size_t(1) << 21);

    const std::vector<int>& spin_counts() const { return spin_counts_; }
    const std::vector<BosonGroupLayout>& boson_groups() const { return boson_groups_; }
    std::size_t total_dim() const { return total_dim_; }
    int total_spins() const { return total_spins_; }
    int total_modes() const { return static_cast<int>(mode_radix_.size()); }

    // First bit of a spin group / first flat mode of a boson group.
    int spin_offset(std::size_t group) const;
    int mode_offset(std::size_t boson_group) const;

    std::size_t encode(const BasisConfig& c) const;
    BasisConfig decode(std::size_t index) const;

    // Fast accessors used by the operator builders.
    bool spin_excited(std::size_t index, int flat_site) const {
        return (index >> flat_site) & 1u;
    }
    std::size_t flip_spin(std::size_t index, int flat_site) const {
        return index ^ (std::size_t(1) << flat_site);
    }
    int mode_occupation(std::size_t index, int flat_mode) const {
        return static_cast<int>((index / mode_stride_[flat_mode]) % mode_radix_[flat_mode]);
    }
    std::size_t bump_mode(std::size_t index, int flat_mode, int delta) const {
        return index + static_cast<std::size_t>(delta) * mode_stride_[flat_mode];
    }
    int mode_cutoff(int flat_mode) const { return mode_radix_[flat_mode]; }

    bool operator==(const SpaceLayout& other) const {
        return spin_counts_ == other.spin_counts_ &&
               boson_groups_ == other.boson_groups_;
    }

private:
    std::vector<int> spin_counts_;
    std::vector<BosonGroupLayout> boson_groups_;
    std::vector<int> spin_offsets_;
    std::vector<int> mode_offsets_;       // per boson group
    std::vector<std::size_t> mode_stride_; // per flat mode
    std::vector<int> mode_radix_;          // per flat mode
    std::size_t total_dim_ = 1;
    int total_spins_ = 0;
};

inline bool operator==(const BosonGroupLayout& a, const BosonGroupLayout& b) {
    return a.modes == b.modes && a.cutoff == b.cutoff;
}

// Layout for a SystemSpec: spin group A, then B if present; then the field
// mode, bath A modes, bath B modes.
SpaceLayout build_layout(const SystemSpec& spec);

} // namespace coopdyn
