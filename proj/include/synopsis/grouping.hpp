#pragma once

#include "synopsis/energy.hpp"
#include "synopsis/tube.hpp"

#include <cstddef>
#include <vector>

namespace synopsis {

struct GroupingResult {
    std::vector<Group> groups;
    double alpha = 0.0;
    double beta = 0.0;
    GroupingMode mode = GroupingMode::transitive;

    /// Index into groups for every tube id.
    std::map<TubeId, std::size_t> membership() const;

    friend bool operator==(const GroupingResult&, const GroupingResult&) = default;
};

/// One singleton group per tube, ascending id.
GroupingResult singleton_groups(const TubeDatabase& db);

/// True when the original interaction distance is below alpha or the start
/// frames differ by less than beta. Disjoint spans never pass the alpha test.
bool pair_groupable(const Tube& a, const Tube& b, const Params& p);

/// Partitions the database into groups.
///
/// transitive: connected components of pair_groupable.
/// literal: one pass in ascending id. An unassigned tube opens a group and
/// pulls in the first unassigned groupable tube, then the scan moves on.
GroupingResult group_tubes(const TubeDatabase& db, const Params& p, const DistanceCache* cache = nullptr);

/// Throws ValidationError unless g partitions exactly the tube ids of db.
void validate_partition(const TubeDatabase& db, const GroupingResult& g);

/// Disjoint-set forest over dense indices with path halving and union by size.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n);

    std::size_t find(std::size_t x);
    bool unite(std::size_t a, std::size_t b);
    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

} // namespace synopsis
