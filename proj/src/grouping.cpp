#include "synopsis/grouping.hpp"

#include "synopsis/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>

namespace synopsis {

namespace {

bool groupable(const Tube& a, const Tube& b, const Params& p, const DistanceCache* cache) {
    if (static_cast<double>(std::llabs(a.start_frame() - b.start_frame())) < p.beta) {
        return true;
    }
    if (cache != nullptr) {
        const OriginalPair facts = cache->get(a.id(), b.id());
        return facts.overlap && facts.interaction < p.alpha;
    }
    const double d = interaction_distance(a, 0, b, 0, p.sigma_mode);
    return d != kNoInteraction && d < p.alpha;
}

std::vector<Group> sorted_groups(std::vector<Group> groups) {
    for (auto& g : groups) {
        std::sort(g.members.begin(), g.members.end());
    }
    std::sort(groups.begin(), groups.end(), [](const Group& l, const Group& r) { return l.smallest() < r.smallest(); });
    return groups;
}

} // namespace

std::map<TubeId, std::size_t> GroupingResult::membership() const {
    std::map<TubeId, std::size_t> out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (TubeId id : groups[i].members) {
            out[id] = i;
        }
    }
    return out;
}

GroupingResult singleton_groups(const TubeDatabase& db) {
    GroupingResult out;
    for (const auto& [id, t] : db.tubes()) {
        out.groups.push_back(Group{{id}});
    }
    return out;
}

bool pair_groupable(const Tube& a, const Tube& b, const Params& p) {
    return groupable(a, b, p, nullptr);
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) {
        return false;
    }
    if (size_[a] < size_[b]) {
        std::swap(a, b);
    }
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

GroupingResult group_tubes(const TubeDatabase& db, const Params& p, const DistanceCache* cache) {
    p.validate();
    if (cache != nullptr && cache->mode() != p.sigma_mode) {
        cache = nullptr;
    }
    GroupingResult out;
    out.alpha = p.alpha;
    out.beta = p.beta;
    out.mode = p.grouping_mode;

    std::vector<const Tube*> tubes;
    tubes.reserve(db.size());
    for (const auto& [id, t] : db.tubes()) {
        tubes.push_back(&t);
    }
    const std::size_t n = tubes.size();

    if (p.grouping_mode == GroupingMode::transitive) {
        DisjointSets sets(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (sets.find(i) != sets.find(j) && groupable(*tubes[i], *tubes[j], p, cache)) {
                    sets.unite(i, j);
                }
            }
        }
        std::map<std::size_t, Group> by_root;
        for (std::size_t i = 0; i < n; ++i) {
            by_root[sets.find(i)].members.push_back(tubes[i]->id());
        }
        for (auto& [root, g] : by_root) {
            out.groups.push_back(std::move(g));
        }
    } else {
        std::vector<bool> assigned(n, false);
        for (std::size_t a = 0; a < n; ++a) {
            if (assigned[a]) {
                continue;
            }
            assigned[a] = true;
            Group g{{tubes[a]->id()}};
            for (std::size_t b = 0; b < n; ++b) {
                if (!assigned[b] && groupable(*tubes[a], *tubes[b], p, cache)) {
                    assigned[b] = true;
                    g.members.push_back(tubes[b]->id());
                    break;
                }
            }
            out.groups.push_back(std::move(g));
        }
    }
    out.groups = sorted_groups(std::move(out.groups));
    return out;
}

void validate_partition(const TubeDatabase& db, const GroupingResult& g) {
    std::set<TubeId> seen;
    for (const auto& group : g.groups) {
        if (group.members.empty()) {
            throw ValidationError("empty group");
        }
        for (TubeId id : group.members) {
            if (!db.contains(id)) {
                throw ValidationError("group references unknown tube " + std::to_string(id));
            }
            if (!seen.insert(id).second) {
                throw ValidationError("tube " + std::to_string(id) + " appears in more than one group");
            }
        }
    }
    if (seen.size() != db.size()) {
        throw ValidationError("grouping does not cover every tube");
    }
}

} // namespace synopsis
