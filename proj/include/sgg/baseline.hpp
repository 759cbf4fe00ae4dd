// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "sgg/scene_graph.hpp"

namespace sgg::baseline {

/// Field selection for the context-window serialization. Defaults match the
/// baseline pipeline: objects carry id/class/position/parent places, places
/// carry id/siblings/parent rooms, rooms carry id/class/position.
struct SerializationConfig {
  bool objects = true;
  bool places = true;
  bool rooms = true;

  bool object_class = true;
  bool object_position = true;
  bool object_parents = true;
  bool place_siblings = true;
  bool place_parents = true;
  bool room_class = true;
  bool room_position = true;
  bool room_siblings = true;
};

namespace detail {

inline std::string symbol_set(std::vector<NodeSymbol> symbols) {
  std::sort(symbols.begin(), symbols.end());
  std::string out = "{";
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += ",";
    out += "'" + symbols[i].str() + "'";
  }
  return out + "}";
}

inline std::string position(const GraphNode& node) {
  return "(" + node.center_printed[0] + "," + node.center_printed[1] + "," +
         node.center_printed[2] + ")";
}

inline EdgeType sibling_edge(Layer layer) {
  switch (layer) {
    case Layer::MeshPlace: return EdgeType::MeshPlaceConnected;
    case Layer::Place: return EdgeType::PlaceConnected;
    case Layer::Room: return EdgeType::RoomConnected;
    default: return EdgeType::ObjectConnected;
  }
}

}  // namespace detail

/// Serializes the graph into the text block handed to the context-window
/// baseline. Deterministic: one line per node in ascending symbol order.
inline std::string serialize_graph(const PropertyGraph& graph,
                                   const SerializationConfig& config = {}) {
  std::string out;
  if (config.objects) {
    out += "Objects:";
    for (const auto& [sym, node] : graph.nodes()) {
      if (node.layer != Layer::Object) continue;
      out += "\n- (id=" + sym.str();
      if (config.object_class)
        out += ", type=" + (node.semantic_class ? *node.semantic_class : "unknown");
      if (config.object_position) out += ", pos=" + detail::position(node);
      if (config.object_parents)
        out += ", parent_places=" +
               detail::symbol_set(graph.edges_from(sym, EdgeType::Contains, Direction::In));
      out += ")";
    }
  }
  if (config.places) {
    if (!out.empty()) out += "\n";
    out += "Places:";
    for (const auto& [sym, node] : graph.nodes()) {
      if (node.layer != Layer::Place && node.layer != Layer::MeshPlace) continue;
      out += "\n- (id=" + sym.str();
      if (config.place_siblings)
        out += ", siblings=" + detail::symbol_set(graph.edges_from(
                                   sym, detail::sibling_edge(node.layer), Direction::Either));
      if (config.place_parents)
        out += ", parent_rooms=" +
               detail::symbol_set(graph.edges_from(sym, EdgeType::Contains, Direction::In));
      out += ")";
    }
  }
  if (config.rooms) {
    if (!out.empty()) out += "\n";
    out += "Rooms:";
    for (const auto& [sym, node] : graph.nodes()) {
      if (node.layer != Layer::Room) continue;
      out += "\n- (id=" + sym.str();
      if (config.room_class)
        out += ", type=" + (node.semantic_class ? *node.semantic_class : "unknown");
      if (config.room_position) out += ", pos=" + detail::position(node);
      if (config.room_siblings) {
        auto siblings = graph.edges_from(sym, EdgeType::RoomConnected, Direction::Either);
        out += ", siblings=" + (siblings.empty() ? "none" : detail::symbol_set(siblings));
      }
      out += ")";
    }
  }
  return out;
}

}  // namespace sgg::baseline
