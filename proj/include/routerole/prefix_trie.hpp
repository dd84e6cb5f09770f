#pragma once

#include <memory>
#include <optional>

#include "routerole/prefix.hpp"

namespace routerole {

// Binary trie over prefix bits, one tree per address family. Node depth
// equals prefix length, so lookups walk at most 32 / 128 links.
template <typename T>
class PrefixTrie {
public:
    struct Match {
        const T* value;
        IpPrefix prefix;
    };

    // Inserts or replaces. Returns true when a new entry was created.
    bool insert(const IpPrefix& p, T value) {
        Node* node = &root(p.v6);
        for (uint8_t i = 0; i < p.length; ++i) {
            std::unique_ptr<Node>& next = p.bit(i) ? node->one : node->zero;
            if (!next) next = std::make_unique<Node>();
            node = next.get();
        }
        bool created = !node->value.has_value();
        node->value = std::move(value);
        if (created) ++size_;
        return created;
    }

    bool erase(const IpPrefix& p) {
        Node* node = walk_exact(p);
        if (!node || !node->value) return false;
        node->value.reset();
        --size_;
        // dead branches are left in place; tables get reused continuously
        return true;
    }

    const T* find_exact(const IpPrefix& p) const {
        const Node* node = walk_exact(p);
        return node && node->value ? &*node->value : nullptr;
    }
    T* find_exact(const IpPrefix& p) {
        Node* node = walk_exact(p);
        return node && node->value ? &*node->value : nullptr;
    }

    // Longest stored prefix covering p, including p itself.
    std::optional<Match> longest_match(const IpPrefix& p) const {
        return best_along(p, p.length);
    }

    // Most specific stored strict super-prefix of p.
    std::optional<Match> nearest_ancestor(const IpPrefix& p) const {
        if (p.length == 0) return std::nullopt;
        return best_along(p, static_cast<uint8_t>(p.length - 1));
    }

    // Applies fn(prefix, value) to every stored prefix covering p, outermost
    // first, including an exact entry.
    template <typename F>
    void for_each_covering(const IpPrefix& p, F&& fn) const {
        const Node* node = &root(p.v6);
        uint8_t depth = 0;
        while (true) {
            if (node->value) fn(prefix_at(p, depth), *node->value);
            if (depth == p.length) break;
            const std::unique_ptr<Node>& next = p.bit(depth) ? node->one : node->zero;
            if (!next) break;
            node = next.get();
            ++depth;
        }
    }

    size_t size() const { return size_; }

private:
    struct Node {
        std::unique_ptr<Node> zero, one;
        std::optional<T> value;
    };

    Node& root(bool v6) { return v6 ? root6_ : root4_; }
    const Node& root(bool v6) const { return v6 ? root6_ : root4_; }

    const Node* walk_exact(const IpPrefix& p) const {
        const Node* node = &root(p.v6);
        for (uint8_t i = 0; i < p.length && node; ++i)
            node = p.bit(i) ? node->one.get() : node->zero.get();
        return node;
    }
    Node* walk_exact(const IpPrefix& p) {
        return const_cast<Node*>(static_cast<const PrefixTrie*>(this)->walk_exact(p));
    }

    static IpPrefix prefix_at(const IpPrefix& p, uint8_t depth) {
        IpPrefix out = p;
        out.length = depth;
        for (unsigned i = depth; i < out.max_bits(); ++i)
            out.addr[i / 8] &= static_cast<uint8_t>(~(1u << (7 - i % 8)));
        return out;
    }

    std::optional<Match> best_along(const IpPrefix& p, uint8_t max_depth) const {
        const Node* node = &root(p.v6);
        std::optional<Match> best;
        uint8_t depth = 0;
        while (true) {
            if (node->value) best = Match{&*node->value, prefix_at(p, depth)};
            if (depth == max_depth) break;
            const std::unique_ptr<Node>& next = p.bit(depth) ? node->one : node->zero;
            if (!next) break;
            node = next.get();
            ++depth;
        }
        return best;
    }

    Node root4_, root6_;
    size_t size_ = 0;
};

} // namespace routerole
