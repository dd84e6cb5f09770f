#include "routerole/monitor.hpp"

namespace routerole {

void RoutingMonitor::seed_rib_entry(Asn vantage, const IpPrefix& prefix, const RawPath& path) {
    if (prefix.is_default_route()) {
        ++stats_.default_routes_ignored;
        return;
    }
    AsPath cleaned;
    try {
        cleaned = preprocess_path(path, options_.collapse_prepend);
    } catch (const Error& e) {
        throw MalformedAnnouncement(std::string("bad RIB entry: ") + e.what());
    }
    bool created = tables_[vantage].insert(prefix, std::move(cleaned));
    if (created)
        ++stats_.rib_entries;
    else
        ++stats_.rib_duplicates;
}

std::optional<RouteChange> RoutingMonitor::apply(const Announcement& ann) {
    if (ann.prefix.is_default_route()) {
        ++stats_.default_routes_ignored;
        return std::nullopt;
    }

    PrefixTrie<AsPath>& table = tables_[ann.vantage];

    if (ann.kind == AnnKind::withdraw) {
        ++stats_.withdrawals;
        table.erase(ann.prefix);
        return std::nullopt;
    }

    ++stats_.announcements;
    AsPath new_path;
    try {
        new_path = preprocess_path(ann.path, options_.collapse_prepend);
    } catch (const Error& e) {
        throw MalformedAnnouncement(std::string("bad announcement: ") + e.what());
    }

    std::optional<RouteChange> change;
    if (const AsPath* exact = table.find_exact(ann.prefix)) {
        if (*exact != new_path) {
            change = RouteChange{next_seq_, ann.index, ann.t,     ann.t_us,
                                 ann.vantage, ann.prefix, ann.prefix, *exact,
                                 new_path};
        }
    } else if (auto ancestor = table.nearest_ancestor(ann.prefix)) {
        if (*ancestor->value != new_path) {
            change = RouteChange{next_seq_, ann.index, ann.t,          ann.t_us,
                                 ann.vantage, ann.prefix, ancestor->prefix, *ancestor->value,
                                 new_path};
        }
    }
    table.insert(ann.prefix, std::move(new_path));
    if (change) {
        ++next_seq_;
        ++stats_.changes;
    }
    return change;
}

size_t RoutingMonitor::table_size(Asn vantage) const {
    auto it = tables_.find(vantage);
    return it == tables_.end() ? 0 : it->second.size();
}

} // namespace routerole
