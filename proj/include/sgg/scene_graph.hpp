// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sgg/json_tree.hpp"

namespace sgg {

enum class Layer { Object, MeshPlace, Place, Room };

inline char layer_prefix(Layer l) {
  switch (l) {
    case Layer::Object: return 'O';
    case Layer::MeshPlace: return 'P';
    case Layer::Place: return 'p';
    case Layer::Room: return 'R';
  }
  return '?';
}

inline const char* layer_name(Layer l) {
  switch (l) {
    case Layer::Object: return "Object";
    case Layer::MeshPlace: return "MeshPlace";
    case Layer::Place: return "Place";
    case Layer::Room: return "Room";
  }
  return "?";
}

/// One-letter case-sensitive prefix plus decimal index, e.g. O1, P12, p4, R2.
struct NodeSymbol {
  Layer layer = Layer::Object;
  std::uint32_t index = 0;

  static std::optional<NodeSymbol> parse(const std::string& text) {
    if (text.size() < 2) return std::nullopt;
    Layer layer;
    switch (text[0]) {
      case 'O': layer = Layer::Object; break;
      case 'P': layer = Layer::MeshPlace; break;
      case 'p': layer = Layer::Place; break;
      case 'R': layer = Layer::Room; break;
      default: return std::nullopt;
    }
    std::uint32_t index = 0;
    auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), index);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    // Reject non-canonical forms like O01 so rendering round-trips exactly.
    NodeSymbol sym{layer, index};
    if (sym.str() != text) return std::nullopt;
    return sym;
  }

  std::string str() const { return layer_prefix(layer) + std::to_string(index); }

  auto operator<=>(const NodeSymbol&) const = default;
};

struct Point3 {
  double x = 0, y = 0, z = 0;

  bool operator==(const Point3&) const = default;
  auto operator<=>(const Point3&) const = default;

  double distance(const Point3& other) const {
    const double dx = x - other.x, dy = y - other.y, dz = z - other.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  double linf_distance(const Point3& other) const {
    return std::max({std::abs(x - other.x), std::abs(y - other.y), std::abs(z - other.z)});
  }
};

struct BoundingBox {
  Point3 min, max;
};

/// Scalar property value storable on a node via SET.
using PropertyValue = std::variant<bool, std::int64_t, double, std::string, Point3>;

struct GraphNode {
  NodeSymbol symbol;
  Layer layer = Layer::Object;
  std::optional<std::string> semantic_class;  // absent for Place nodes
  Point3 center;
  std::array<std::string, 3> center_printed;  // input lexemes, for serialization
  std::optional<BoundingBox> bbox;
  std::map<std::string, PropertyValue> extra_properties;  // added via SET
};

enum class EdgeType {
  Contains,
  ObjectConnected,
  PlaceConnected,
  MeshPlaceConnected,
  RoomConnected,
};
inline constexpr int kEdgeTypeCount = 5;

inline const char* edge_type_name(EdgeType t) {
  switch (t) {
    case EdgeType::Contains: return "CONTAINS";
    case EdgeType::ObjectConnected: return "OBJECT_CONNECTED";
    case EdgeType::PlaceConnected: return "PLACE_CONNECTED";
    case EdgeType::MeshPlaceConnected: return "MESH_PLACE_CONNECTED";
    case EdgeType::RoomConnected: return "ROOM_CONNECTED";
  }
  return "?";
}

inline std::optional<EdgeType> edge_type_from_name(const std::string& name) {
  if (name == "CONTAINS") return EdgeType::Contains;
  if (name == "OBJECT_CONNECTED") return EdgeType::ObjectConnected;
  if (name == "PLACE_CONNECTED") return EdgeType::PlaceConnected;
  if (name == "MESH_PLACE_CONNECTED") return EdgeType::MeshPlaceConnected;
  if (name == "ROOM_CONNECTED") return EdgeType::RoomConnected;
  return std::nullopt;
}

/// True when the type is an intra-layer connectivity edge, which is stored
/// once and traversed as undirected.
inline bool is_connectivity_edge(EdgeType t) { return t != EdgeType::Contains; }

struct GraphEdge {
  NodeSymbol source;
  NodeSymbol target;
  EdgeType type = EdgeType::Contains;

  auto operator<=>(const GraphEdge&) const = default;
};

struct Labelspace {
  std::vector<std::string> objects;
  std::vector<std::string> rooms;
  std::vector<std::string> mesh_places;

  const std::vector<std::string>* for_layer(Layer l) const {
    switch (l) {
      case Layer::Object: return &objects;
      case Layer::MeshPlace: return &mesh_places;
      case Layer::Room: return &rooms;
      case Layer::Place: return nullptr;
    }
    return nullptr;
  }
};

/// Default per-layer labelspace, used when a graph file does not override it.
inline Labelspace default_labelspace() {
  return Labelspace{
      {"tree", "vehicle", "signal", "rock", "fence", "boat", "sign", "door", "pole",
       "rail", "window", "flower", "bed", "box", "storage", "barrel", "bag", "basket",
       "seating", "flag", "decor", "light", "appliance", "trash", "bicycle", "food",
       "clothes"},
      {"road", "field", "shelter", "indoor", "stairs", "sidewalk", "path", "boundary",
       "shore", "ground", "dock", "parking", "footing"},
      {"water", "ground", "grass", "sand", "sidewalk", "dock", "path", "hill", "bridge",
       "wall", "floor", "stairs", "structure", "surface", "flora"},
  };
}

struct Violation {
  std::string rule;
  std::vector<NodeSymbol> symbols;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
};

enum class Direction { Out, In, Either };

/// The robot's world model: an immutable-after-load, fully indexed property
/// graph. SET queries are the only sanctioned mutation and require exclusive
/// access; concurrent read-only queries are safe.
class PropertyGraph {
 public:
  using NodeMap = std::map<NodeSymbol, GraphNode>;

  const NodeMap& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const Labelspace& labelspace() const { return labelspace_; }

  const GraphNode* node(const NodeSymbol& symbol) const {
    auto it = nodes_.find(symbol);
    return it == nodes_.end() ? nullptr : &it->second;
  }
  const GraphNode* node(const std::string& symbol_text) const {
    auto sym = NodeSymbol::parse(symbol_text);
    return sym ? node(*sym) : nullptr;
  }
  GraphNode* mutable_node(const NodeSymbol& symbol) {
    auto it = nodes_.find(symbol);
    return it == nodes_.end() ? nullptr : &it->second;
  }

  /// Neighbors of `symbol` over edges of `type`, ascending by layer prefix
  /// then index. Throws LoadError for an unknown symbol.
  std::vector<NodeSymbol> edges_from(const NodeSymbol& symbol, EdgeType type,
                                     Direction direction) const {
    if (!node(symbol)) throw LoadError("unknown symbol " + symbol.str());
    const auto it = adjacency_.find(symbol);
    if (it == adjacency_.end()) return {};
    const auto& adj = it->second;
    const int t = static_cast<int>(type);
    if (direction == Direction::Out) return adj.out[t];
    if (direction == Direction::In) return adj.in[t];
    std::vector<NodeSymbol> merged = adj.out[t];
    merged.insert(merged.end(), adj.in[t].begin(), adj.in[t].end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
  }

  bool has_edge(const NodeSymbol& source, const NodeSymbol& target, EdgeType type) const {
    auto it = adjacency_.find(source);
    if (it == adjacency_.end()) return false;
    const auto& out = it->second.out[static_cast<int>(type)];
    return std::binary_search(out.begin(), out.end(), target);
  }

  void add_node(GraphNode node) {
    if (nodes_.count(node.symbol))
      throw LoadError("duplicate symbol " + node.symbol.str());
    nodes_.emplace(node.symbol, std::move(node));
  }

  void add_edge(const NodeSymbol& source, const NodeSymbol& target, EdgeType type) {
    if (!node(source)) throw LoadError("edge endpoint " + source.str() + " is not a node");
    if (!node(target)) throw LoadError("edge endpoint " + target.str() + " is not a node");
    if (source == target) throw LoadError("self-loop on " + source.str());
    edges_.push_back({source, target, type});
    auto& src = adjacency_[source];
    auto& dst = adjacency_[target];
    insert_sorted(src.out[static_cast<int>(type)], target);
    insert_sorted(dst.in[static_cast<int>(type)], source);
  }

  void set_labelspace(Labelspace ls) { labelspace_ = std::move(ls); }

  /// Extra property names ever assigned via SET. Names stay known after the
  /// last value is erased so reads yield null instead of an unknown-property
  /// error.
  const std::set<std::string>& known_extra_properties() const { return extra_property_names_; }
  void record_extra_property(const std::string& name) { extra_property_names_.insert(name); }

  void finalize() { std::sort(edges_.begin(), edges_.end()); }

 private:
  struct Adjacency {
    std::array<std::vector<NodeSymbol>, kEdgeTypeCount> out;
    std::array<std::vector<NodeSymbol>, kEdgeTypeCount> in;
  };

  static void insert_sorted(std::vector<NodeSymbol>& list, const NodeSymbol& sym) {
    auto pos = std::lower_bound(list.begin(), list.end(), sym);
    list.insert(pos, sym);
  }

  NodeMap nodes_;
  std::vector<GraphEdge> edges_;
  std::map<NodeSymbol, Adjacency> adjacency_;
  Labelspace labelspace_ = default_labelspace();
  std::set<std::string> extra_property_names_;
};

namespace detail {

inline Point3 parse_center(const JsonTree& center, const std::string& id,
                           std::array<std::string, 3>* printed) {
  if (!center.is_array() || center.items.size() != 3)
    throw LoadError("node " + id + ": center must be an array of three numbers");
  Point3 p;
  double* coords[3] = {&p.x, &p.y, &p.z};
  for (int i = 0; i < 3; ++i) {
    const auto& c = center.items[i];
    if (!c.is_number()) throw LoadError("node " + id + ": center coordinate is not a number");
    *coords[i] = c.as_double();
    if (!std::isfinite(*coords[i]))
      throw LoadError("node " + id + ": center coordinate is not finite");
    (*printed)[i] = c.printed();
  }
  return p;
}

inline Point3 parse_corner(const JsonTree& corner, const std::string& id) {
  std::array<std::string, 3> ignored;
  return parse_center(corner, id, &ignored);
}

inline void load_node_section(PropertyGraph& graph, const JsonTree& nodes,
                              const std::string& key, Layer layer, bool has_class) {
  const JsonTree* section = nodes.find(key);
  if (!section) return;
  if (!section->is_array()) throw LoadError("nodes." + key + " must be an array");
  for (const auto& entry : section->items) {
    if (!entry.is_object()) throw LoadError("nodes." + key + " entry must be an object");
    const JsonTree* id = entry.find("id");
    if (!id || !id->is_string()) throw LoadError("nodes." + key + " entry missing id");
    auto sym = NodeSymbol::parse(id->text);
    if (!sym || sym->layer != layer)
      throw LoadError("id " + id->text + " is not a valid " + layer_name(layer) + " symbol");
    GraphNode node;
    node.symbol = *sym;
    node.layer = layer;
    if (has_class) {
      const JsonTree* cls = entry.find("class");
      if (!cls || !cls->is_string()) throw LoadError("node " + id->text + " missing class");
      node.semantic_class = cls->text;
    } else if (entry.find("class")) {
      throw LoadError("Place node " + id->text + " must not have a class");
    }
    const JsonTree* center = entry.find("center");
    if (!center) throw LoadError("node " + id->text + " missing center");
    node.center = parse_center(*center, id->text, &node.center_printed);
    if (const JsonTree* bbox = entry.find("bbox")) {
      if (!bbox->is_object() || !bbox->find("min") || !bbox->find("max"))
        throw LoadError("node " + id->text + ": bbox needs min and max corners");
      node.bbox = BoundingBox{parse_corner(*bbox->find("min"), id->text),
                              parse_corner(*bbox->find("max"), id->text)};
    }
    graph.add_node(std::move(node));
  }
}

inline std::vector<std::string> load_label_list(const JsonTree& labelspace,
                                                const std::string& key,
                                                std::vector<std::string> fallback) {
  const JsonTree* list = labelspace.find(key);
  if (!list) return fallback;
  if (!list->is_array()) throw LoadError("labelspace." + key + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : list->items) {
    if (!item.is_string()) throw LoadError("labelspace." + key + " entries must be strings");
    out.push_back(item.text);
  }
  return out;
}

}  // namespace detail

/// Loads a scene-graph JSON document into a fully indexed PropertyGraph.
/// Throws LoadError on malformed JSON (with byte offset), duplicate symbols,
/// unknown edge types, or dangling endpoints.
inline PropertyGraph load_graph(const std::string& document) {
  const JsonTree doc = parse_json_tree(document);
  if (!doc.is_object()) throw LoadError("document root must be an object");

  PropertyGraph graph;
  if (const JsonTree* ls = doc.find("labelspace")) {
    if (!ls->is_object()) throw LoadError("labelspace must be an object");
    Labelspace defaults = default_labelspace();
    Labelspace space;
    space.objects = detail::load_label_list(*ls, "objects", defaults.objects);
    space.rooms = detail::load_label_list(*ls, "rooms", defaults.rooms);
    space.mesh_places = detail::load_label_list(*ls, "mesh_places", defaults.mesh_places);
    graph.set_labelspace(std::move(space));
  }

  if (const JsonTree* nodes = doc.find("nodes")) {
    if (!nodes->is_object()) throw LoadError("nodes must be an object");
    detail::load_node_section(graph, *nodes, "objects", Layer::Object, true);
    detail::load_node_section(graph, *nodes, "mesh_places", Layer::MeshPlace, true);
    detail::load_node_section(graph, *nodes, "places", Layer::Place, false);
    detail::load_node_section(graph, *nodes, "rooms", Layer::Room, true);
  }

  if (const JsonTree* edges = doc.find("edges")) {
    if (!edges->is_object()) throw LoadError("edges must be an object");
    static const std::map<std::string, EdgeType> kEdgeKeys = {
        {"contains", EdgeType::Contains},
        {"object_connected", EdgeType::ObjectConnected},
        {"place_connected", EdgeType::PlaceConnected},
        {"mesh_place_connected", EdgeType::MeshPlaceConnected},
        {"room_connected", EdgeType::RoomConnected},
    };
    for (const auto& [key, section] : edges->members) {
      auto it = kEdgeKeys.find(key);
      if (it == kEdgeKeys.end()) throw LoadError("unknown edge type '" + key + "'");
      if (!section.is_array()) throw LoadError("edges." + key + " must be an array");
      for (const auto& pair : section.items) {
        if (!pair.is_array() || pair.items.size() != 2 || !pair.items[0].is_string() ||
            !pair.items[1].is_string())
          throw LoadError("edges." + key + " entries must be [source, target] pairs");
        auto src = NodeSymbol::parse(pair.items[0].text);
        auto dst = NodeSymbol::parse(pair.items[1].text);
        if (!src) throw LoadError("edge endpoint " + pair.items[0].text + " is not a node");
        if (!dst) throw LoadError("edge endpoint " + pair.items[1].text + " is not a node");
        graph.add_edge(*src, *dst, it->second);
      }
    }
  }

  graph.finalize();
  return graph;
}

/// Checks containment direction, connectivity layering, object parentage, and
/// labelspace membership. Problems are report entries, never exceptions.
inline ValidationReport validate(const PropertyGraph& graph) {
  ValidationReport report;

  auto contains_ok = [](Layer parent, Layer child) {
    if (parent == Layer::Room) return child == Layer::MeshPlace || child == Layer::Place;
    if (parent == Layer::MeshPlace || parent == Layer::Place) return child == Layer::Object;
    return false;
  };

  for (const auto& edge : graph.edges()) {
    if (edge.type == EdgeType::Contains) {
      if (!contains_ok(edge.source.layer, edge.target.layer)) {
        report.violations.push_back(
            {"containment-direction",
             {edge.source, edge.target},
             "CONTAINS edge " + edge.source.str() + "->" + edge.target.str() +
                 " violates the layer hierarchy"});
      }
    } else {
      Layer expected;
      switch (edge.type) {
        case EdgeType::ObjectConnected: expected = Layer::Object; break;
        case EdgeType::PlaceConnected: expected = Layer::Place; break;
        case EdgeType::MeshPlaceConnected: expected = Layer::MeshPlace; break;
        default: expected = Layer::Room; break;
      }
      if (edge.source.layer != expected || edge.target.layer != expected) {
        report.violations.push_back(
            {"connectivity-layer",
             {edge.source, edge.target},
             std::string(edge_type_name(edge.type)) + " edge " + edge.source.str() + "--" +
                 edge.target.str() + " joins nodes outside the " + layer_name(expected) +
                 " layer"});
      }
    }
  }

  for (const auto& [symbol, node] : graph.nodes()) {
    if (node.layer == Layer::Object &&
        graph.edges_from(symbol, EdgeType::Contains, Direction::In).empty()) {
      report.violations.push_back(
          {"object-parent", {symbol}, "object " + symbol.str() + " has no containing place"});
    }
    if (node.semantic_class) {
      const auto* labels = graph.labelspace().for_layer(node.layer);
      if (labels && std::find(labels->begin(), labels->end(), *node.semantic_class) ==
                        labels->end()) {
        report.violations.push_back(
            {"labelspace",
             {symbol},
             "class '" + *node.semantic_class + "' of " + symbol.str() +
                 " is not in the labelspace"});
      }
    }
  }

  return report;
}

}  // namespace sgg
