#include "sfj/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sfj {

SignedDigraph generate_network(std::size_t n, std::size_t z, std::uint64_t seed) {
    if (z < 2) throw Error("generate: need at least 2 clusters");
    if (2 * z > n)
        throw Error("generate: " + std::to_string(z) + " clusters need at least " + std::to_string(2 * z) +
                    " agents (an LTP agent plus one persuaded agent each)");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(0.1, 10.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto coin = [&](double p) { return unit(rng) < p; };
    const auto signed_weight = [&] { return coin(0.5) ? magnitude(rng) : -magnitude(rng); };

    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), 1);
    std::shuffle(ids.begin(), ids.end(), rng);

    std::vector<std::size_t> sizes(z, 2);
    for (std::size_t extra = n - 2 * z; extra > 0; --extra)
        ++sizes[std::uniform_int_distribution<std::size_t>(0, z - 1)(rng)];

    std::vector<std::vector<NodeId>> clusters;  // clusters[c][0] is the head
    std::vector<std::size_t> cluster_of(n + 1);
    for (std::size_t c = 0, next = 0; c < z; ++c) {
        clusters.emplace_back(ids.begin() + static_cast<std::ptrdiff_t>(next),
                              ids.begin() + static_cast<std::ptrdiff_t>(next + sizes[c]));
        for (NodeId id : clusters.back()) cluster_of[static_cast<std::size_t>(id)] = c;
        next += sizes[c];
    }

    const std::size_t stubborn_heads = std::uniform_int_distribution<std::size_t>(2, z)(rng);
    std::vector<double> beta(n, 0.0);
    std::vector<NodeId> stubborn;
    for (std::size_t c = 0; c < stubborn_heads; ++c) {
        const NodeId head = clusters[c][0];
        beta[static_cast<std::size_t>(head - 1)] = 1.0 - unit(rng);
        stubborn.push_back(head);
    }

    std::vector<Edge> edges;
    std::set<std::pair<NodeId, NodeId>> present;
    const auto add = [&](NodeId from, NodeId to, double w) {
        if (present.emplace(from, to).second) edges.push_back({from, to, w});
    };

    for (const auto& members : clusters) {
        for (std::size_t i = 1; i < members.size(); ++i) {
            const std::size_t parent = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
            add(members[parent], members[i], magnitude(rng));
            for (std::size_t j = 0; j < members.size(); ++j)
                if (j != i && coin(0.3)) add(members[j], members[i], magnitude(rng));
        }
    }

    for (std::size_t c = stubborn_heads; c < z; ++c) {
        std::vector<NodeId> pick;
        std::sample(stubborn.begin(), stubborn.end(), std::back_inserter(pick), 2, rng);
        for (NodeId s : pick) add(s, clusters[c][0], signed_weight());
    }

    for (const auto& members : clusters) {
        const NodeId head = members[0];
        for (std::size_t v = 1; v <= n; ++v)
            if (cluster_of[v] != cluster_of[static_cast<std::size_t>(head)] && coin(0.15))
                add(static_cast<NodeId>(v), head, signed_weight());
    }

    std::vector<double> x0(n);
    for (double& x : x0) x = 10.0 * unit(rng);
    return SignedDigraph(n, std::move(edges), std::move(beta), std::move(x0));
}

}  // namespace sfj
