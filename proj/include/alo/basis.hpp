#ifndef ALO_BASIS_HPP
#define ALO_BASIS_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alo/errors.hpp"

namespace alo {

/*
 * Truncated product basis. Each mode keeps the levels 0..dim-1; the top
 * `guard` levels of every mode are excluded from the valid subspace, where
 * algebraic identities are expected to hold. The rightmost mode is the
 * fastest-varying index of the flattened basis.
 */
class BasisSpec {
public:
    BasisSpec() : BasisSpec(std::vector<std::size_t>{2}) {}

    explicit BasisSpec(std::vector<std::size_t> mode_dims, std::size_t guard = 0,
                       std::vector<std::string> labels = {})
        : mode_dims_(std::move(mode_dims)), guard_(guard), labels_(std::move(labels))
    {
        if (mode_dims_.empty())
            throw DimensionError("BasisSpec: at least one mode is required");
        for (auto d : mode_dims_)
            if (d < 2) throw DimensionError("BasisSpec: every mode needs dimension >= 2");
        const auto min_dim = *std::min_element(mode_dims_.begin(), mode_dims_.end());
        if (guard_ >= min_dim)
            throw DimensionError("BasisSpec: guard " + std::to_string(guard_) +
                                 " leaves no valid levels (min mode dimension " +
                                 std::to_string(min_dim) + ")");
        if (labels_.empty()) {
            for (std::size_t m = 0; m < mode_dims_.size(); ++m)
                labels_.push_back("mode" + std::to_string(m + 1));
        }
        if (labels_.size() != mode_dims_.size())
            throw DimensionError("BasisSpec: one label per mode is required");

        total_ = std::accumulate(mode_dims_.begin(), mode_dims_.end(), std::size_t{1},
                                 std::multiplies<>());
        valid_.reserve(total_);
        for (std::size_t flat = 0; flat < total_; ++flat)
            if (is_valid(flat)) valid_.push_back(static_cast<Eigen::Index>(flat));
    }

    static BasisSpec single(std::size_t dim, std::size_t guard = 0, std::string label = "mode1")
    {
        return BasisSpec({dim}, guard, {std::move(label)});
    }

    const std::vector<std::size_t>& mode_dims() const { return mode_dims_; }
    std::size_t guard() const { return guard_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t modes() const { return mode_dims_.size(); }
    std::size_t total_dim() const { return total_; }
    std::size_t valid_dim() const { return valid_.size(); }

    /// Flattened indices of the valid subspace, ascending.
    const std::vector<Eigen::Index>& valid_indices() const { return valid_; }

    std::vector<std::size_t> mode_indices(std::size_t flat) const
    {
        std::vector<std::size_t> idx(mode_dims_.size());
        for (std::size_t m = mode_dims_.size(); m-- > 0;) {
            idx[m] = flat % mode_dims_[m];
            flat /= mode_dims_[m];
        }
        return idx;
    }

    std::size_t flat_index(std::span<const std::size_t> idx) const
    {
        if (idx.size() != mode_dims_.size())
            throw DimensionError("BasisSpec::flat_index: wrong number of mode indices");
        std::size_t flat = 0;
        for (std::size_t m = 0; m < idx.size(); ++m) {
            if (idx[m] >= mode_dims_[m]) throw DimensionError("BasisSpec::flat_index: out of range");
            flat = flat * mode_dims_[m] + idx[m];
        }
        return flat;
    }

    bool is_valid(std::size_t flat) const
    {
        for (std::size_t m = mode_dims_.size(); m-- > 0;) {
            if (flat % mode_dims_[m] >= mode_dims_[m] - guard_) return false;
            flat /= mode_dims_[m];
        }
        return true;
    }

    /// Product basis with this basis as the slow (left) factor.
    BasisSpec tensor(const BasisSpec& right) const
    {
        if (right.guard_ != guard_)
            throw DimensionError("BasisSpec::tensor: guard bands differ");
        auto dims = mode_dims_;
        dims.insert(dims.end(), right.mode_dims_.begin(), right.mode_dims_.end());
        auto labels = labels_;
        labels.insert(labels.end(), right.labels_.begin(), right.labels_.end());
        return BasisSpec(std::move(dims), guard_, std::move(labels));
    }

    /// Same shape and guard; labels are cosmetic.
    bool compatible(const BasisSpec& other) const
    {
        return mode_dims_ == other.mode_dims_ && guard_ == other.guard_;
    }

    bool operator==(const BasisSpec& other) const
    {
        return compatible(other) && labels_ == other.labels_;
    }

private:
    std::vector<std::size_t> mode_dims_;
    std::size_t guard_ = 0;
    std::vector<std::string> labels_;
    std::size_t total_ = 0;
    std::vector<Eigen::Index> valid_;
};

} // namespace alo

#endif
