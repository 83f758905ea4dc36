#pragma once

#include <vector>

namespace ddrc {

// Edmonds-Karp on real-valued capacities.
class MaxFlow {
public:
    MaxFlow(int num_nodes) : head_(num_nodes, -1) {}

    // returns the id of the forward arc; the paired residual arc is id^1
    int add_arc(int from, int to, double cap);
    double solve(int s, int t);
    double flow_on(int arc) const;  // net flow pushed through a forward arc

private:
    struct Edge {
        int to;
        int next;
        double cap;
    };
    std::vector<Edge> edges_;
    std::vector<int> head_;
    std::vector<double> initial_cap_;
};

}  // namespace ddrc
