#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "packperc/geometry.hpp"

namespace packperc {

// Uniform grid over integer cell coordinates.  Every shape is registered in
// all cells its (inflated) bounding box meets, so a pair of shapes whose
// inflated boxes overlap always shares at least one cell: candidate
// generation has no false negatives.
class SpatialIndex {
  public:
    SpatialIndex(const Packing& p, double cell_size, double inflate = 0.0);

    double cell_size() const { return cell_; }

    // Visits every unordered candidate pair (i, j), i < j, exactly once.
    template <typename F>
    void for_each_candidate_pair(F&& fn) const {
        std::vector<int> stamp(boxes_.size(), -1);
        for (int i = 0; i < static_cast<int>(boxes_.size()); ++i) {
            for_cells_of(i, [&](uint64_t key) {
                auto it = cells_.find(key);
                if (it == cells_.end()) return;
                for (int j : it->second) {
                    if (j <= i || stamp[j] == i) continue;
                    stamp[j] = i;
                    if (boxes_overlap(i, j)) fn(i, j);
                }
            });
        }
    }

    // Candidates for one shape (excluding itself), deduplicated.
    std::vector<int> candidates_of(int i) const;

    // Suggested cell size for a packing: the median diameter, clamped below
    // by a fraction of the largest diameter so that big shapes in a packing
    // of mostly small ones do not explode the number of cell registrations.
    static double default_cell_size(const Packing& p);

  private:
    template <typename F>
    void for_cells_of(int i, F&& fn) const {
        const auto& b = boxes_[i];
        const int d = static_cast<int>(b.lo.size());
        std::vector<int64_t> c0(d), c1(d), cur(d);
        for (int k = 0; k < d; ++k) {
            c0[k] = cell_coord(b.lo[k]);
            c1[k] = cell_coord(b.hi[k]);
            cur[k] = c0[k];
        }
        while (true) {
            fn(hash_cell(cur));
            int k = 0;
            while (k < d && ++cur[k] > c1[k]) {
                cur[k] = c0[k];
                ++k;
            }
            if (k == d) break;
        }
    }

    int64_t cell_coord(double x) const;
    static uint64_t hash_cell(const std::vector<int64_t>& c);
    bool boxes_overlap(int i, int j) const;

    double cell_ = 1.0;
    std::vector<Aabb> boxes_;  // inflated bounding boxes
    std::unordered_map<uint64_t, std::vector<int>> cells_;
};

}  // namespace packperc
