// Copyright 2026 The TAH Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfg.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace tah {

namespace {

constexpr std::string_view kNameComment = "# name: ";

uint32_t to_node_id(uint64_t value, const std::string& where) {
  if (value > UINT32_MAX) {
    fail(TAH_ERR_SEMANTIC, where + ": node id " + std::to_string(value) +
                               " out of range");
  }
  return static_cast<uint32_t>(value);
}

// Parses an unsigned decimal token; `where` names the location for
// diagnostics.
uint32_t parse_node_token(std::string_view token, const std::string& where) {
  uint64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty()) {
    fail(TAH_ERR_SYNTAX,
         where + ": expected a non-negative integer, got '" +
             std::string(token) + "'");
  }
  return to_node_id(value, where);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

Cfg parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(TAH_ERR_SYNTAX, std::string("json: ") + e.what());
  }
  if (!doc.is_object()) {
    fail(TAH_ERR_SEMANTIC, "json: top-level value must be an object");
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "name" && it.key() != "nodes" && it.key() != "edges") {
      fail(TAH_ERR_SEMANTIC, "json: unknown key '" + it.key() + "'");
    }
  }
  if (!doc.contains("name") || !doc["name"].is_string()) {
    fail(TAH_ERR_SEMANTIC, "json: missing or non-string 'name'");
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    fail(TAH_ERR_SEMANTIC, "json: missing or non-array 'nodes'");
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    fail(TAH_ERR_SEMANTIC, "json: missing or non-array 'edges'");
  }

  std::vector<uint32_t> nodes;
  nodes.reserve(doc["nodes"].size());
  size_t position = 0;
  for (const auto& value : doc["nodes"]) {
    std::string where = "json: nodes[" + std::to_string(position++) + "]";
    if (!value.is_number_unsigned()) {
      fail(TAH_ERR_SEMANTIC, where + ": not a non-negative integer");
    }
    nodes.push_back(to_node_id(value.get<uint64_t>(), where));
  }

  std::vector<Cfg::Edge> edges;
  edges.reserve(doc["edges"].size());
  position = 0;
  for (const auto& value : doc["edges"]) {
    std::string where = "json: edges[" + std::to_string(position++) + "]";
    if (!value.is_array() || value.size() != 2 ||
        !value[0].is_number_unsigned() || !value[1].is_number_unsigned()) {
      fail(TAH_ERR_SEMANTIC,
           where + ": expected a pair of non-negative integers");
    }
    edges.emplace_back(to_node_id(value[0].get<uint64_t>(), where),
                       to_node_id(value[1].get<uint64_t>(), where));
  }

  return Cfg::from_parts(doc["name"].get<std::string>(), std::move(nodes),
                         std::move(edges));
}

Cfg parse_edgelist(std::string_view text) {
  std::string name;
  bool saw_name = false;
  std::vector<uint32_t> declared;
  std::vector<Cfg::Edge> edges;

  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::string where = "edgelist line " + std::to_string(line_no);
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.front().front() == '#') {
      if (!saw_name && line.substr(0, kNameComment.size()) == kNameComment) {
        name = std::string(line.substr(kNameComment.size()));
        saw_name = true;
      }
      continue;
    }
    if (tokens.front() == "node") {
      if (tokens.size() != 2) {
        fail(TAH_ERR_SYNTAX, where + ": expected 'node <id>'");
      }
      declared.push_back(parse_node_token(tokens[1], where));
      continue;
    }
    if (tokens.size() != 2) {
      fail(TAH_ERR_SYNTAX, where + ": expected 'src dst'");
    }
    edges.emplace_back(parse_node_token(tokens[0], where),
                       parse_node_token(tokens[1], where));
  }

  // The node set is everything mentioned; redundant declarations of an
  // edge endpoint are harmless.
  std::vector<uint32_t> nodes = declared;
  for (const auto& [src, dst] : edges) {
    nodes.push_back(src);
    nodes.push_back(dst);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  return Cfg::from_parts(std::move(name), std::move(nodes), std::move(edges));
}

}  // namespace

Cfg Cfg::from_parts(std::string name, std::vector<uint32_t> nodes,
                    std::vector<Edge> edges) {
  std::sort(nodes.begin(), nodes.end());
  auto dup_node = std::adjacent_find(nodes.begin(), nodes.end());
  if (dup_node != nodes.end()) {
    fail(TAH_ERR_SEMANTIC, "duplicate node " + std::to_string(*dup_node));
  }

  std::sort(edges.begin(), edges.end());
  auto dup_edge = std::adjacent_find(edges.begin(), edges.end());
  if (dup_edge != edges.end()) {
    fail(TAH_ERR_SEMANTIC, "duplicate edge (" +
                               std::to_string(dup_edge->first) + "," +
                               std::to_string(dup_edge->second) + ")");
  }
  for (const auto& [src, dst] : edges) {
    for (uint32_t endpoint : {src, dst}) {
      if (!std::binary_search(nodes.begin(), nodes.end(), endpoint)) {
        fail(TAH_ERR_SEMANTIC,
             "edge (" + std::to_string(src) + "," + std::to_string(dst) +
                 ") references unknown node " + std::to_string(endpoint));
      }
    }
  }

  Cfg g;
  g.name_ = std::move(name);
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  g.build_index();
  return g;
}

void Cfg::build_index() {
  const size_t n = nodes_.size();
  offsets_.assign(n + 1, 0);
  indegree_.assign(n, 0);
  outdegree_.assign(n, 0);
  adjacency_.clear();
  adjacency_.reserve(edges_.size());

  for (const auto& [src, dst] : edges_) {
    size_t si = index_of(src);
    size_t di = index_of(dst);
    ++outdegree_[si];
    ++indegree_[di];
    ++offsets_[si + 1];
  }
  for (size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  // edges_ is sorted by (src,dst), so appending in order yields sorted
  // successor lists.
  for (const auto& [src, dst] : edges_) {
    (void)src;
    adjacency_.push_back(static_cast<uint32_t>(index_of(dst)));
  }
}

size_t Cfg::index_of(uint32_t node) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end() || *it != node) {
    fail(TAH_ERR_UNKNOWN_NODE, "unknown node " + std::to_string(node));
  }
  return static_cast<size_t>(it - nodes_.begin());
}

DegreePair Cfg::degrees(uint32_t node) const {
  return degrees_at(index_of(node));
}

Cfg Cfg::parse(std::string_view text, CfgFormat format) {
  return format == CfgFormat::kJson ? parse_json(text) : parse_edgelist(text);
}

std::string Cfg::serialize(CfgFormat format) const {
  if (format == CfgFormat::kJson) {
    nlohmann::ordered_json doc;
    doc["name"] = name_;
    doc["nodes"] = nodes_;
    auto edge_array = nlohmann::ordered_json::array();
    for (const auto& [src, dst] : edges_) {
      edge_array.push_back({src, dst});
    }
    doc["edges"] = std::move(edge_array);
    return doc.dump();
  }

  std::ostringstream out;
  if (!name_.empty() && name_.find('\n') == std::string::npos &&
      name_.find('\r') == std::string::npos) {
    out << kNameComment << name_ << '\n';
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (indegree_[i] == 0 && outdegree_[i] == 0) {
      out << "node " << nodes_[i] << '\n';
    }
  }
  for (const auto& [src, dst] : edges_) {
    out << src << ' ' << dst << '\n';
  }
  return out.str();
}

}  // namespace tah
