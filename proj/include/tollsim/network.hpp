#pragma once

#include "tollsim/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace tollsim {

using NodeIndex = std::uint32_t;
using LinkIndex = std::uint32_t;

struct Node {
    std::string id;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Node&, const Node&) = default;
};

struct Link {
    std::string id;
    std::string from;
    std::string to;
    double length = 0.0;     // m
    double capacity = 0.0;   // veh/h
    double free_speed = 0.0; // m/s
    int lanes = 1;
    ModeSet modes{Mode::car};

    Seconds free_flow_time() const { return length / free_speed; }

    friend bool operator==(const Link&, const Link&) = default;
};

struct Diagnostic {
    std::string subject;  // node or link id, or "network"
    std::string field;    // offending attribute, empty for structural issues
    std::string message;
};

struct ValidateOptions {
    /// When non-empty, the car subgraph must be strongly connected over the
    /// nodes these activity links lead to.
    std::vector<std::string> activity_links;
};

/// Checks every node/link invariant and, optionally, car connectivity.
/// Never throws; an empty result means the data is valid.
std::vector<Diagnostic> validate(std::span<const Node> nodes, std::span<const Link> links,
                                 const ValidateOptions& options = {});

/// Immutable validated road network. Links keep file order; `links_by_id()`
/// gives the stable id order used wherever processing order matters.
class Network {
public:
    /// Throws ValidationError with the first diagnostic if the data is invalid.
    Network(std::vector<Node> nodes, std::vector<Link> links);

    std::span<const Node> nodes() const { return nodes_; }
    std::span<const Link> links() const { return links_; }

    const Node& node(NodeIndex i) const { return nodes_[i]; }
    const Link& link(LinkIndex i) const { return links_[i]; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t link_count() const { return links_.size(); }

    NodeIndex from_node(LinkIndex l) const { return link_from_[l]; }
    NodeIndex to_node(LinkIndex l) const { return link_to_[l]; }

    std::optional<NodeIndex> find_node(std::string_view id) const;
    std::optional<LinkIndex> find_link(std::string_view id) const;
    NodeIndex node_index(std::string_view id) const;  // throws if absent
    LinkIndex link_index(std::string_view id) const;  // throws if absent

    /// Outgoing links of a node, sorted by link id.
    std::span<const LinkIndex> out_links(NodeIndex n) const;
    std::span<const LinkIndex> in_links(NodeIndex n) const;

    /// All link indices sorted lexicographically by id.
    std::span<const LinkIndex> links_by_id() const { return links_by_id_; }
    /// Position of a link in `links_by_id()`.
    std::uint32_t id_rank(LinkIndex l) const { return id_rank_[l]; }

    friend bool operator==(const Network& a, const Network& b)
    {
        return a.nodes_ == b.nodes_ && a.links_ == b.links_;
    }

private:
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::unordered_map<std::string, NodeIndex> node_lookup_;
    std::unordered_map<std::string, LinkIndex> link_lookup_;
    std::vector<NodeIndex> link_from_;
    std::vector<NodeIndex> link_to_;
    std::vector<std::uint32_t> out_offsets_;
    std::vector<LinkIndex> out_links_;
    std::vector<std::uint32_t> in_offsets_;
    std::vector<LinkIndex> in_links_;
    std::vector<LinkIndex> links_by_id_;
    std::vector<std::uint32_t> id_rank_;
};

/// Region of inside nodes plus the derived boundary-crossing links.
/// Link lists are sorted by link id.
struct Cordon {
    std::vector<std::string> inside_nodes;  // sorted
    std::vector<LinkIndex> entry_links;
    std::vector<LinkIndex> exit_links;
    std::vector<bool> inside;      // per node index
    std::vector<bool> is_entry;    // per link index
    std::vector<bool> is_exit;     // per link index

    bool contains(NodeIndex n) const { return inside[n]; }
};

/// Throws ValidationError for unknown, empty, or universal node sets.
Cordon build_cordon(const Network& net, std::span<const std::string> inside);

Network network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const Network& net);

/// Parses a network document. Syntax errors report line and column; record
/// errors name the offending array entry.
Network parse_network(std::string_view text);
Network load_network(const std::filesystem::path& path);
void save_network(const Network& net, const std::filesystem::path& path);

}  // namespace tollsim
