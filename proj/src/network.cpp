#include "tollsim/network.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

namespace tollsim {

using detail::json;

namespace {

void check_positive(std::vector<Diagnostic>& out, const Link& l, const char* field, double value)
{
    if (!(std::isfinite(value) && value > 0.0))
        out.push_back({l.id, field, "link '" + l.id + "': " + field + " must be positive and finite"});
}

// Nodes reachable from `start` over car links, forward or reversed.
std::vector<bool> car_reach(std::span<const Link> links,
                            const std::unordered_map<std::string, std::size_t>& node_ix,
                            std::size_t node_count, std::size_t start, bool reverse)
{
    std::vector<std::vector<std::size_t>> adj(node_count);
    for (const auto& l : links) {
        if (!l.modes.contains(Mode::car))
            continue;
        auto f = node_ix.find(l.from);
        auto t = node_ix.find(l.to);
        if (f == node_ix.end() || t == node_ix.end())
            continue;
        if (reverse)
            adj[t->second].push_back(f->second);
        else
            adj[f->second].push_back(t->second);
    }
    std::vector<bool> seen(node_count, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        auto n = stack.back();
        stack.pop_back();
        for (auto m : adj[n])
            if (!seen[m]) {
                seen[m] = true;
                stack.push_back(m);
            }
    }
    return seen;
}

}  // namespace

std::vector<Diagnostic> validate(std::span<const Node> nodes, std::span<const Link> links,
                                 const ValidateOptions& options)
{
    std::vector<Diagnostic> out;
    std::unordered_map<std::string, std::size_t> node_ix;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (!node_ix.emplace(n.id, i).second)
            out.push_back({n.id, "id", "duplicate node id '" + n.id + "'"});
        if (!std::isfinite(n.x) || !std::isfinite(n.y))
            out.push_back({n.id, "x/y", "node '" + n.id + "': coordinates must be finite"});
    }

    std::unordered_set<std::string> link_ids;
    std::unordered_map<std::string, const Link*> link_by_id;
    for (const auto& l : links) {
        if (!link_ids.insert(l.id).second)
            out.push_back({l.id, "id", "duplicate link id '" + l.id + "'"});
        link_by_id.emplace(l.id, &l);
        if (!node_ix.contains(l.from))
            out.push_back({l.id, "from", "link '" + l.id + "' references unknown node '" + l.from + "'"});
        if (!node_ix.contains(l.to))
            out.push_back({l.id, "to", "link '" + l.id + "' references unknown node '" + l.to + "'"});
        if (l.from == l.to)
            out.push_back({l.id, "to", "link '" + l.id + "': from and to must differ"});
        check_positive(out, l, "length", l.length);
        check_positive(out, l, "capacity", l.capacity);
        check_positive(out, l, "freespeed", l.free_speed);
        if (l.lanes < 1)
            out.push_back({l.id, "lanes", "link '" + l.id + "': lanes must be >= 1"});
        if (l.modes.empty())
            out.push_back({l.id, "modes", "link '" + l.id + "': modes must not be empty"});
    }

    if (!options.activity_links.empty() && out.empty()) {
        std::set<std::size_t> targets;
        for (const auto& id : options.activity_links) {
            auto it = link_by_id.find(id);
            if (it == link_by_id.end()) {
                out.push_back({id, "", "activity references unknown link '" + id + "'"});
                continue;
            }
            targets.insert(node_ix.at(it->second->to));
        }
        if (!targets.empty()) {
            auto start = *targets.begin();
            auto fwd = car_reach(links, node_ix, nodes.size(), start, false);
            auto bwd = car_reach(links, node_ix, nodes.size(), start, true);
            for (auto t : targets)
                if (!fwd[t] || !bwd[t])
                    out.push_back({nodes[t].id, "",
                                   "car network is not strongly connected: activity node '" + nodes[t].id +
                                       "' and '" + nodes[start].id + "' are not mutually reachable"});
        }
    }
    return out;
}

Network::Network(std::vector<Node> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links))
{
    auto diags = validate(nodes_, links_);
    if (!diags.empty())
        throw ValidationError(diags.front().message);

    for (std::size_t i = 0; i < nodes_.size(); ++i)
        node_lookup_.emplace(nodes_[i].id, NodeIndex(i));
    link_from_.resize(links_.size());
    link_to_.resize(links_.size());
    for (std::size_t i = 0; i < links_.size(); ++i) {
        link_lookup_.emplace(links_[i].id, LinkIndex(i));
        link_from_[i] = node_lookup_.at(links_[i].from);
        link_to_[i] = node_lookup_.at(links_[i].to);
    }

    links_by_id_.resize(links_.size());
    std::iota(links_by_id_.begin(), links_by_id_.end(), LinkIndex{0});
    std::sort(links_by_id_.begin(), links_by_id_.end(),
              [&](LinkIndex a, LinkIndex b) { return links_[a].id < links_[b].id; });
    id_rank_.resize(links_.size());
    for (std::uint32_t r = 0; r < links_by_id_.size(); ++r)
        id_rank_[links_by_id_[r]] = r;

    auto build_adjacency = [&](const std::vector<NodeIndex>& key, std::vector<std::uint32_t>& offsets,
                               std::vector<LinkIndex>& flat) {
        offsets.assign(nodes_.size() + 1, 0);
        for (auto n : key)
            ++offsets[n + 1];
        std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
        flat.resize(links_.size());
        auto cursor = offsets;
        for (auto l : links_by_id_)
            flat[cursor[key[l]]++] = l;
    };
    build_adjacency(link_from_, out_offsets_, out_links_);
    build_adjacency(link_to_, in_offsets_, in_links_);
}

std::optional<NodeIndex> Network::find_node(std::string_view id) const
{
    auto it = node_lookup_.find(std::string(id));
    if (it == node_lookup_.end())
        return std::nullopt;
    return it->second;
}

std::optional<LinkIndex> Network::find_link(std::string_view id) const
{
    auto it = link_lookup_.find(std::string(id));
    if (it == link_lookup_.end())
        return std::nullopt;
    return it->second;
}

NodeIndex Network::node_index(std::string_view id) const
{
    if (auto n = find_node(id))
        return *n;
    throw ValidationError("unknown node '" + std::string(id) + "'");
}

LinkIndex Network::link_index(std::string_view id) const
{
    if (auto l = find_link(id))
        return *l;
    throw ValidationError("unknown link '" + std::string(id) + "'");
}

std::span<const LinkIndex> Network::out_links(NodeIndex n) const
{
    return std::span<const LinkIndex>(out_links_).subspan(out_offsets_[n], out_offsets_[n + 1] - out_offsets_[n]);
}

std::span<const LinkIndex> Network::in_links(NodeIndex n) const
{
    return std::span<const LinkIndex>(in_links_).subspan(in_offsets_[n], in_offsets_[n + 1] - in_offsets_[n]);
}

Cordon build_cordon(const Network& net, std::span<const std::string> inside)
{
    Cordon c;
    c.inside.assign(net.node_count(), false);
    for (const auto& id : inside) {
        auto n = net.find_node(id);
        if (!n)
            throw ValidationError("cordon references unknown node '" + id + "'");
        c.inside[*n] = true;
    }
    auto count = std::count(c.inside.begin(), c.inside.end(), true);
    if (count == 0)
        throw ValidationError("cordon region is empty");
    if (static_cast<std::size_t>(count) == net.node_count())
        throw ValidationError("cordon region contains every node; no boundary exists");

    for (NodeIndex n = 0; n < net.node_count(); ++n)
        if (c.inside[n])
            c.inside_nodes.push_back(net.node(n).id);
    std::sort(c.inside_nodes.begin(), c.inside_nodes.end());

    c.is_entry.assign(net.link_count(), false);
    c.is_exit.assign(net.link_count(), false);
    for (auto l : net.links_by_id()) {
        bool from_in = c.inside[net.from_node(l)];
        bool to_in = c.inside[net.to_node(l)];
        if (!from_in && to_in) {
            c.entry_links.push_back(l);
            c.is_entry[l] = true;
        } else if (from_in && !to_in) {
            c.exit_links.push_back(l);
            c.is_exit[l] = true;
        }
    }
    return c;
}

Network network_from_json(const json& doc)
{
    if (!doc.is_object())
        throw ParseError("network: top level must be an object");
    auto nodes_it = doc.find("nodes");
    auto links_it = doc.find("links");
    if (nodes_it == doc.end() || !nodes_it->is_array())
        throw ParseError("network: missing array 'nodes'");
    if (links_it == doc.end() || !links_it->is_array())
        throw ParseError("network: missing array 'links'");

    std::vector<Node> nodes;
    nodes.reserve(nodes_it->size());
    for (std::size_t i = 0; i < nodes_it->size(); ++i) {
        const auto& rec = (*nodes_it)[i];
        std::string locus = "nodes[" + std::to_string(i) + "]";
        if (!rec.is_object())
            throw ParseError(locus + ": expected an object");
        nodes.push_back({detail::id_field(rec, "id", locus), detail::required<double>(rec, "x", locus),
                         detail::required<double>(rec, "y", locus)});
    }

    std::vector<Link> links;
    links.reserve(links_it->size());
    for (std::size_t i = 0; i < links_it->size(); ++i) {
        const auto& rec = (*links_it)[i];
        std::string locus = "links[" + std::to_string(i) + "]";
        if (!rec.is_object())
            throw ParseError(locus + ": expected an object");
        Link l;
        l.id = detail::id_field(rec, "id", locus);
        locus += " ('" + l.id + "')";
        l.from = detail::id_field(rec, "from", locus);
        l.to = detail::id_field(rec, "to", locus);
        l.length = detail::required<double>(rec, "length", locus);
        l.capacity = detail::required<double>(rec, "capacity", locus);
        l.free_speed = detail::required<double>(rec, "freespeed", locus);
        l.lanes = detail::optional_field<int>(rec, "lanes", 1, locus);
        if (auto m = rec.find("modes"); m != rec.end()) {
            ModeSet modes;
            std::vector<std::string> names;
            if (m->is_string()) {
                // MATSim-style comma separated list
                std::string s = m->get<std::string>();
                std::size_t start = 0;
                while (start <= s.size()) {
                    auto end = s.find(',', start);
                    if (end == std::string::npos)
                        end = s.size();
                    if (end > start)
                        names.push_back(s.substr(start, end - start));
                    start = end + 1;
                }
            } else {
                names = detail::required<std::vector<std::string>>(rec, "modes", locus);
            }
            for (const auto& name : names) {
                auto mode = parse_mode(name);
                if (!mode)
                    throw ParseError(locus + ": unknown mode '" + name + "'");
                modes.insert(*mode);
            }
            l.modes = modes;
        }
        links.push_back(std::move(l));
    }
    return Network(std::move(nodes), std::move(links));
}

json network_to_json(const Network& net)
{
    json nodes = json::array();
    for (const auto& n : net.nodes())
        nodes.push_back({{"id", n.id}, {"x", n.x}, {"y", n.y}});
    json links = json::array();
    for (const auto& l : net.links()) {
        json modes = json::array();
        for (auto m : kAllModes)
            if (l.modes.contains(m))
                modes.push_back(std::string(to_string(m)));
        links.push_back({{"id", l.id},
                         {"from", l.from},
                         {"to", l.to},
                         {"length", l.length},
                         {"capacity", l.capacity},
                         {"freespeed", l.free_speed},
                         {"lanes", l.lanes},
                         {"modes", modes}});
    }
    return {{"nodes", nodes}, {"links", links}};
}

Network parse_network(std::string_view text)
{
    return network_from_json(detail::parse_json(text, "network"));
}

Network load_network(const std::filesystem::path& path)
{
    auto text = detail::read_text_file(path);
    try {
        return network_from_json(detail::parse_json(text, path.string()));
    } catch (const ParseError& e) {
        std::string msg = e.what();
        if (msg.rfind(path.string(), 0) == 0)
            throw;
        throw ParseError(path.string() + ": " + msg);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_network(const Network& net, const std::filesystem::path& path)
{
    detail::write_text_file(path, detail::dump(network_to_json(net)));
}

}  // namespace tollsim
