#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "disip/io.hpp"

namespace disip::io::detail {

using Json = nlohmann::ordered_json;

// Cursor over a parsed document that remembers where it is, so schema errors
// can name the exact field.
class Reader {
 public:
  Reader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {}

  bool has(const char* key) const { return node_.is_object() && node_.contains(key); }

  Reader operator[](const char* key) const {
    if (!node_.is_object()) fail("expected an object");
    auto it = node_.find(key);
    if (it == node_.end()) {
      throw SchemaError(join(key) + ": missing field");
    }
    return Reader(*it, join(key));
  }

  Reader at(std::size_t index) const {
    return Reader(node_.at(index), path_ + "[" + std::to_string(index) + "]");
  }

  std::size_t size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  double number() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }

  std::uint64_t unsigned_integer() const {
    if (!node_.is_number_unsigned()) fail("expected a non-negative integer");
    return node_.get<std::uint64_t>();
  }

  bool boolean() const {
    if (!node_.is_boolean()) fail("expected true or false");
    return node_.get<bool>();
  }

  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  void expect_schema(const char* schema) const {
    const std::string found = (*this)["schema"].string();
    if (found != schema) {
      throw SchemaError(join("schema") + ": expected '" + schema + "', found '" + found + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError((path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }

  const std::string& path() const { return path_; }

 private:
  std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& node_;
  std::string path_;
};

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace disip::io::detail
