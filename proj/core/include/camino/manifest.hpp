// Copyright 2026 The CAMINO Authors
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

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace camino::manifest {

// The manifest dialect is a closed, restricted YAML-like format:
//   - UTF-8 text, 2-space indentation, no tabs
//   - maps, lists, and scalars (string, integer, boolean)
//   - line comments with '#'; a trailing "# set: <param>" comment on a
//     scalar line annotates that scalar as a hydration parameter
//   - no anchors, no multi-document streams; the root is always a map
//   - list items are scalars or inline-started maps ("- key: value")
//
// serialize() preserves key order and annotations; canonical() sorts map
// keys recursively and is the digest input.

using ScalarValue = std::variant<std::int64_t, bool, std::string>;

std::string scalar_to_string(const ScalarValue& value);

class Node {
 public:
  using Map = std::vector<std::pair<std::string, Node>>;
  using List = std::vector<Node>;

  Node() : data_(ScalarValue{std::string{}}) {}
  explicit Node(ScalarValue scalar) : data_(std::move(scalar)) {}
  explicit Node(Map map) : data_(std::move(map)) {}
  explicit Node(List list) : data_(std::move(list)) {}

  static Node scalar(ScalarValue value, std::string setter = {}) {
    Node n(std::move(value));
    n.setter_ = std::move(setter);
    return n;
  }

  bool is_scalar() const { return std::holds_alternative<ScalarValue>(data_); }
  bool is_map() const { return std::holds_alternative<Map>(data_); }
  bool is_list() const { return std::holds_alternative<List>(data_); }

  const ScalarValue& scalar() const { return std::get<ScalarValue>(data_); }
  ScalarValue& scalar() { return std::get<ScalarValue>(data_); }
  const Map& map() const { return std::get<Map>(data_); }
  Map& map() { return std::get<Map>(data_); }
  const List& list() const { return std::get<List>(data_); }
  List& list() { return std::get<List>(data_); }

  const std::string& setter() const { return setter_; }
  void set_setter(std::string name) { setter_ = std::move(name); }

  // Map lookup; nullptr when absent or not a map.
  const Node* find(std::string_view key) const;
  Node* find(std::string_view key);

  bool operator==(const Node& other) const {
    return setter_ == other.setter_ && data_ == other.data_;
  }

 private:
  std::variant<ScalarValue, Map, List> data_;
  std::string setter_;
};

using Document = Node;

Document parse(std::string_view text);
std::string serialize(const Document& doc);
std::string canonical(const Document& doc);

// Navigates a dotted path; list indices are decimal segments
// ("spec.containers.0.resources.cpu"). nullptr when the path is absent.
const Node* find_path(const Document& doc, std::string_view path);

struct SetterTarget {
  std::size_t doc_index{0};
  std::string path;

  bool operator==(const SetterTarget& other) const {
    return doc_index == other.doc_index && path == other.path;
  }
};

// All annotated scalars across a package's documents, keyed by parameter.
std::map<std::string, std::vector<SetterTarget>> collect_setters(
    const std::vector<Document>& docs);

// Replaces every annotated scalar whose parameter has a binding and strips
// the annotation from bound scalars. Parameters without a binding are left
// annotated and reported through `unresolved`; matched parameter names are
// added to `resolved`.
Document bind(const Document& doc, const std::map<std::string, ScalarValue>& bindings,
              std::set<std::string>& resolved, std::set<std::string>& unresolved);

}  // namespace camino::manifest
