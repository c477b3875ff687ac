#include "packperc/spatial_index.hpp"

#include <algorithm>
#include <cmath>

namespace packperc {

SpatialIndex::SpatialIndex(const Packing& p, double cell_size, double inflate) : cell_(cell_size) {
    boxes_.reserve(p.shapes.size());
    for (const auto& s : p.shapes) {
        Aabb b = bounding_box(s);
        for (auto& x : b.lo) x -= inflate;
        for (auto& x : b.hi) x += inflate;
        boxes_.push_back(std::move(b));
    }
    for (int i = 0; i < static_cast<int>(boxes_.size()); ++i)
        for_cells_of(i, [&](uint64_t key) { cells_[key].push_back(i); });
    for (auto& [key, v] : cells_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

int64_t SpatialIndex::cell_coord(double x) const { return static_cast<int64_t>(std::floor(x / cell_)); }

uint64_t SpatialIndex::hash_cell(const std::vector<int64_t>& c) {
    uint64_t h = 0x9E3779B97F4A7C15ull;
    for (int64_t v : c) {
        h ^= static_cast<uint64_t>(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        h *= 0xFF51AFD7ED558CCDull;
    }
    return h;
}

bool SpatialIndex::boxes_overlap(int i, int j) const {
    const auto &a = boxes_[i], &b = boxes_[j];
    for (size_t k = 0; k < a.lo.size(); ++k)
        if (a.hi[k] < b.lo[k] || b.hi[k] < a.lo[k]) return false;
    return true;
}

std::vector<int> SpatialIndex::candidates_of(int i) const {
    std::vector<int> out;
    for_cells_of(i, [&](uint64_t key) {
        auto it = cells_.find(key);
        if (it == cells_.end()) return;
        for (int j : it->second)
            if (j != i && boxes_overlap(i, j)) out.push_back(j);
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double SpatialIndex::default_cell_size(const Packing& p) {
    std::vector<double> diams;
    diams.reserve(p.shapes.size());
    double max_d = 0.0;
    for (const auto& s : p.shapes) {
        diams.push_back(diameter(s));
        max_d = std::max(max_d, diams.back());
    }
    if (diams.empty()) return 1.0;
    std::nth_element(diams.begin(), diams.begin() + diams.size() / 2, diams.end());
    const double median = diams[diams.size() / 2];
    // Clamp so one huge shape among many tiny ones stays in a bounded number
    // of cells; candidate generation stays exact regardless of cell size.
    return std::max(median, max_d / 8.0);
}

}  // namespace packperc
