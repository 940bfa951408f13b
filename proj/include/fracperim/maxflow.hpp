#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

namespace fracperim {

/// Integer max-flow / min-cut on a dense graph: highest-label push-relabel
/// with the gap heuristic and an exact initial distance labeling. Both
/// phases run, so the final state is a feasible maximum flow and the
/// residual graph is valid for extracting the canonical minimal and maximal
/// source-side cuts.
class MaxFlow {
public:
    explicit MaxFlow(int n) : n_(n) {}

    /// Undirected edges carry their weight on both arcs; terminal arcs pass
    /// rev_cap = 0.
    void add_edge(int u, int v, std::int64_t cap, std::int64_t rev_cap) {
        edges_.push_back({u, v, cap, rev_cap});
    }

    std::int64_t solve(int s, int t) {
        s_ = s;
        t_ = t;
        build();
        init_labels();
        saturate_source();
        // nodes are re-validated on pop, so duplicate bucket entries are fine
        while (highest_ >= 0) {
            auto& bucket = buckets_[std::size_t(highest_)];
            if (bucket.empty()) {
                --highest_;
                continue;
            }
            const int u = bucket.back();
            bucket.pop_back();
            if (u == s_ || u == t_ || excess_[u] <= 0 || height_[u] != highest_) continue;
            discharge(u);
        }
        return excess_[t_];
    }

    /// Source side of the minimal min-cut: nodes reachable from s in the
    /// residual graph.
    std::vector<char> min_cut_source_side() const {
        std::vector<char> seen(n_, 0);
        std::queue<int> q;
        seen[s_] = 1;
        q.push(s_);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int a = head_[u]; a < head_[u + 1]; ++a)
                if (cap_[a] > 0 && !seen[to_[a]]) {
                    seen[to_[a]] = 1;
                    q.push(to_[a]);
                }
        }
        return seen;
    }

    /// Source side of the maximal min-cut: complement of the nodes that can
    /// still reach t in the residual graph.
    std::vector<char> max_cut_source_side() const {
        std::vector<char> reaches_t(n_, 0);
        std::queue<int> q;
        reaches_t[t_] = 1;
        q.push(t_);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            // v reaches u when arc v->u has residual capacity, i.e. the
            // reverse of an arc u->v does.
            for (int a = head_[u]; a < head_[u + 1]; ++a)
                if (cap_[rev_[a]] > 0 && !reaches_t[to_[a]]) {
                    reaches_t[to_[a]] = 1;
                    q.push(to_[a]);
                }
        }
        std::vector<char> side(n_, 0);
        for (int v = 0; v < n_; ++v) side[v] = reaches_t[v] ? 0 : 1;
        return side;
    }

private:
    struct EdgeInput {
        int u, v;
        std::int64_t cap, rev_cap;
    };

    void build() {
        std::vector<int> degree(n_, 0);
        for (const auto& e : edges_) {
            ++degree[e.u];
            ++degree[e.v];
        }
        head_.assign(n_ + 1, 0);
        for (int v = 0; v < n_; ++v) head_[v + 1] = head_[v] + degree[v];
        to_.resize(edges_.size() * 2);
        rev_.resize(edges_.size() * 2);
        cap_.resize(edges_.size() * 2);
        std::vector<int> fill(head_.begin(), head_.end() - 1);
        for (const auto& e : edges_) {
            const int a = fill[e.u]++;
            const int b = fill[e.v]++;
            to_[std::size_t(a)] = e.v;
            rev_[std::size_t(a)] = b;
            cap_[std::size_t(a)] = e.cap;
            to_[std::size_t(b)] = e.u;
            rev_[std::size_t(b)] = a;
            cap_[std::size_t(b)] = e.rev_cap;
        }
        edges_.clear();
        edges_.shrink_to_fit();
        excess_.assign(n_, 0);
        cur_ = head_;
        max_height_ = 2 * n_;
        buckets_.assign(std::size_t(max_height_) + 2, {});
        count_.assign(std::size_t(max_height_) + 2, 0);
        highest_ = -1;
    }

    void init_labels() {
        height_.assign(n_, n_);
        std::queue<int> q;
        height_[t_] = 0;
        q.push(t_);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int a = head_[u]; a < head_[u + 1]; ++a) {
                const int v = to_[a];
                if (v != s_ && height_[v] == n_ && cap_[rev_[a]] > 0) {
                    height_[v] = height_[u] + 1;
                    q.push(v);
                }
            }
        }
        height_[s_] = n_;
        for (int v = 0; v < n_; ++v) ++count_[std::size_t(height_[v])];
    }

    void saturate_source() {
        for (int a = head_[s_]; a < head_[s_ + 1]; ++a) {
            const std::int64_t d = cap_[a];
            if (d > 0) {
                cap_[a] = 0;
                cap_[rev_[a]] += d;
                excess_[s_] -= d;
                excess_[to_[a]] += d;
                activate(to_[a]);
            }
        }
    }

    void activate(int v) {
        if (v == s_ || v == t_ || excess_[v] <= 0) return;
        buckets_[std::size_t(height_[v])].push_back(v);
        highest_ = std::max(highest_, height_[v]);
    }

    void discharge(int u) {
        while (excess_[u] > 0) {
            if (cur_[u] == head_[u + 1]) {
                if (!relabel(u)) return;  // no residual arcs left at all
                cur_[u] = head_[u];
                continue;
            }
            const int a = cur_[u];
            const int v = to_[a];
            if (cap_[a] > 0 && height_[u] == height_[v] + 1) {
                const std::int64_t d = std::min(excess_[u], cap_[a]);
                cap_[a] -= d;
                cap_[rev_[a]] += d;
                excess_[u] -= d;
                excess_[v] += d;
                activate(v);
            } else {
                ++cur_[u];
            }
        }
    }

    bool relabel(int u) {
        const int old = height_[u];
        int best = max_height_ + 1;
        for (int a = head_[u]; a < head_[u + 1]; ++a)
            if (cap_[a] > 0) best = std::min(best, height_[to_[a]] + 1);
        --count_[std::size_t(old)];
        height_[u] = best;
        if (best > max_height_) return false;
        ++count_[std::size_t(best)];
        highest_ = std::max(highest_, best);
        if (count_[std::size_t(old)] == 0 && old < n_) apply_gap(old);
        return height_[u] <= max_height_;
    }

    // Heights strictly between `gap` and n cannot reach t anymore; lift them
    // past n and re-bucket the ones still carrying excess.
    void apply_gap(int gap) {
        for (int v = 0; v < n_; ++v) {
            if (v == s_) continue;
            const int hv = height_[v];
            if (hv > gap && hv < n_) {
                --count_[std::size_t(hv)];
                height_[v] = n_ + 1;
                ++count_[std::size_t(n_ + 1)];
                cur_[v] = head_[v];
                activate(v);
            }
        }
    }

    int n_ = 0;
    int s_ = 0, t_ = 0, max_height_ = 0;
    std::vector<EdgeInput> edges_;
    std::vector<int> head_, to_, rev_;
    std::vector<std::int64_t> cap_;
    std::vector<int> height_, cur_;
    std::vector<std::int64_t> excess_;
    std::vector<int> count_;
    std::vector<std::vector<int>> buckets_;
    int highest_ = -1;
};

}  // namespace fracperim
