#include "coopdyn/layout.hpp"

#include "coopdyn/errors.hpp"
#include "coopdyn/system_spec.hpp"

#include <limits>
#include <string>

namespace coopdyn {

namespace {

std::size_t checked_mul(std::size_t a, std::size_t b, std::size_t budget) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
        throw CapacityError("space dimension overflows size_t");
    std::size_t r = a * b;
    if (r > budget)
        throw CapacityError("space dimension " + std::to_string(r) +
                            " exceeds budget " + std::to_string(budget));
    return r;
}

} // namespace

SpaceLayout::SpaceLayout(std::vector<int> spin_counts, std::vector<BosonGroupLayout> boson_groups,
                         std::size_t budget)
    : spin_counts_(std::move(spin_counts)), boson_groups_(std::move(boson_groups)) {
    for (int n : spin_counts_) {
        if (n < 0) throw ConfigError("spin group size must be >= 0");
        spin_offsets_.push_back(total_spins_);
        total_spins_ += n;
    }
    if (total_spins_ >= 63) throw CapacityError("too many spins for a 64-bit basis index");
    total_dim_ = 1;
    for (int b = 0; b < total_spins_; ++b) total_dim_ = checked_mul(total_dim_, 2, budget);

    std::size_t stride = total_dim_;
    for (const auto& g : boson_groups_) {
        if (g.modes < 0) throw ConfigError("mode count must be >= 0");
        if (g.modes > 0 && g.cutoff < 2) throw ConfigError("boson cutoff must be >= 2");
        mode_offsets_.push_back(static_cast<int>(mode_radix_.size()));
        for (int m = 0; m < g.modes; ++m) {
            mode_stride_.push_back(stride);
            mode_radix_.push_back(g.cutoff);
            total_dim_ = checked_mul(total_dim_, static_cast<std::size_t>(g.cutoff), budget);
            stride *= static_cast<std::size_t>(g.cutoff);
        }
    }
}

int SpaceLayout::spin_offset(std::size_t group) const {
    if (group >= spin_counts_.size()) throw ConfigError("spin group index out of range");
    return spin_offsets_[group];
}

int SpaceLayout::mode_offset(std::size_t boson_group) const {
    if (boson_group >= boson_groups_.size()) throw ConfigError("boson group index out of range");
    return mode_offsets_[boson_group];
}

std::size_t SpaceLayout::encode(const BasisConfig& c) const {
    if (c.spins.size() != static_cast<std::size_t>(total_spins_) ||
        c.modes.size() != mode_radix_.size())
        throw ConfigError("basis config shape does not match layout");
    std::size_t index = 0;
    for (int b = 0; b < total_spins_; ++b) {
        if (c.spins[b] > 1) throw ConfigError("spin value must be 0 or 1");
        index |= static_cast<std::size_t>(c.spins[b]) << b;
    }
    for (std::size_t m = 0; m < mode_radix_.size(); ++m) {
        if (c.modes[m] < 0 || c.modes[m] >= mode_radix_[m])
            throw ConfigError("mode occupation out of range");
        index += static_cast<std::size_t>(c.modes[m]) * mode_stride_[m];
    }
    return index;
}

BasisConfig SpaceLayout::decode(std::size_t index) const {
    if (index >= total_dim_) throw ConfigError("basis index out of range");
    BasisConfig c;
    c.spins.resize(static_cast<std::size_t>(total_spins_));
    for (int b = 0; b < total_spins_; ++b) c.spins[b] = (index >> b) & 1u;
    c.modes.resize(mode_radix_.size());
    for (std::size_t m = 0; m < mode_radix_.size(); ++m)
        c.modes[m] = mode_occupation(index, static_cast<int>(m));
    return c;
}

SpaceLayout build_layout(const SystemSpec& spec) {
    spec.validate();
    std::vector<int> spins{spec.group_a.sites};
    if (spec.group_b) spins.push_back(spec.group_b->sites);

    std::vector<BosonGroupLayout> bosons;
    if (spec.field_mode)
        bosons.push_back({1, spec.field_mode->cutoff});
    if (spec.bath_a)
        bosons.push_back({static_cast<int>(spec.bath_a->mode_frequencies.size()), spec.bath_a->cutoff});
    if (spec.bath_b)
        bosons.push_back({static_cast<int>(spec.bath_b->mode_frequencies.size()), spec.bath_b->cutoff});

    return SpaceLayout(std::move(spins), std::move(bosons), spec.dimension_budget);
}

} // namespace coopdyn
