#include "ddrc/maxflow.hpp"

#include <limits>
#include <queue>

namespace ddrc {

int MaxFlow::add_arc(int from, int to, double cap) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({to, head_[from], cap});
    head_[from] = id;
    edges_.push_back({from, head_[to], 0.0});
    head_[to] = id + 1;
    initial_cap_.push_back(cap);
    initial_cap_.push_back(0.0);
    return id;
}

double MaxFlow::solve(int s, int t) {
    constexpr double eps = 1e-12;
    double total = 0.0;
    const int n = static_cast<int>(head_.size());
    std::vector<int> pred_edge(n);
    for (;;) {
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        q.push(s);
        seen[s] = 1;
        bool reached = false;
        while (!q.empty() && !reached) {
            const int v = q.front();
            q.pop();
            for (int e = head_[v]; e >= 0; e = edges_[e].next) {
                if (edges_[e].cap <= eps || seen[edges_[e].to]) continue;
                seen[edges_[e].to] = 1;
                pred_edge[edges_[e].to] = e;
                if (edges_[e].to == t) { reached = true; break; }
                q.push(edges_[e].to);
            }
        }
        if (!reached) break;
        double push = std::numeric_limits<double>::infinity();
        for (int v = t; v != s;) {
            const int e = pred_edge[v];
            push = std::min(push, edges_[e].cap);
            v = edges_[e ^ 1].to;
        }
        for (int v = t; v != s;) {
            const int e = pred_edge[v];
            edges_[e].cap -= push;
            edges_[e ^ 1].cap += push;
            v = edges_[e ^ 1].to;
        }
        total += push;
    }
    return total;
}

double MaxFlow::flow_on(int arc) const {
    return initial_cap_[arc] - edges_[arc].cap;
}

}  // namespace ddrc
