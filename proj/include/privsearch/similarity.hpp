#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "privsearch/privacy.hpp"

// Local social similarity between the querying user and a candidate: overlap
// of the user's declared connections with the candidate's visible neighbors.

namespace privsearch {

enum class LocalSimMode {
    jaccard,        // |A ∩ B| / |A ∪ B|
    user_normalized // |A ∩ B| / |user connections|
};

// The querying user's connection list resolved against a network. Labels that
// do not match any node still count toward set sizes (union / normalizer) but
// can never intersect a neighbor set.
class UserConnections {
public:
    UserConnections() = default;

    static UserConnections resolve(const std::vector<std::string>& labels, const Network& net) {
        UserConnections uc;
        std::unordered_set<std::string> seen;
        for (const auto& l : labels) {
            if (!seen.insert(l).second)
                continue;
            NodeId id = net.find(l);
            if (id == Network::npos)
                ++uc.unknown_;
            else
                uc.known_.insert(id);
        }
        return uc;
    }

    bool contains(NodeId a) const { return known_.count(a) != 0; }
    std::size_t size() const { return known_.size() + unknown_; }
    bool empty() const { return size() == 0; }
    const std::unordered_set<NodeId>& known() const { return known_; }

private:
    std::unordered_set<NodeId> known_;
    std::size_t unknown_ = 0;
};

// Returns a value in [0,1]; 0 when both sets are empty. A private candidate
// has no visible neighbors, so its similarity is always 0.
inline double local_similarity(const UserConnections& user, NodeId candidate,
                               const PrivacyView& view,
                               LocalSimMode mode = LocalSimMode::jaccard) {
    std::size_t common = 0;
    std::size_t visible = 0;
    view.for_visible_neighbors(candidate, [&](NodeId b) {
        ++visible;
        if (user.contains(b))
            ++common;
    });
    if (mode == LocalSimMode::user_normalized) {
        if (user.empty())
            return 0.0;
        return static_cast<double>(common) / static_cast<double>(user.size());
    }
    const std::size_t uni = visible + user.size() - common;
    if (uni == 0)
        return 0.0;
    return static_cast<double>(common) / static_cast<double>(uni);
}

} // namespace privsearch
