#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "isoblock/core/common.hpp"

namespace isoblock {
namespace json {

/// Minimal JSON document builder with insertion-ordered objects and
/// full-precision number formatting (numbers are printed with 17 significant
/// digits so every double round-trips exactly).  Non-finite numbers are
/// emitted as the strings "inf", "-inf", "nan" to keep the document valid.
class Value {
 public:
  Value() : kind_(Kind::Null) {}

  static Value object() {
    Value v;
    v.kind_ = Kind::Object;
    return v;
  }
  static Value array() {
    Value v;
    v.kind_ = Kind::Array;
    return v;
  }
  static Value string(std::string s) {
    Value v;
    v.kind_ = Kind::String;
    v.str_ = std::move(s);
    return v;
  }
  static Value number(double x) {
    Value v;
    v.kind_ = Kind::Number;
    v.num_ = x;
    return v;
  }
  static Value integer(long long x) {
    Value v;
    v.kind_ = Kind::Integer;
    v.int_ = x;
    return v;
  }
  static Value boolean(bool b) {
    Value v;
    v.kind_ = Kind::Bool;
    v.bool_ = b;
    return v;
  }
  static Value null() { return Value(); }

  Value& set(const std::string& key, Value v) {
    require(Kind::Object, "set");
    members_.emplace_back(key, std::move(v));
    return *this;
  }
  Value& push(Value v) {
    require(Kind::Array, "push");
    items_.push_back(std::move(v));
    return *this;
  }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    out.push_back('\n');
    return out;
  }

 private:
  enum class Kind { Null, Bool, Integer, Number, String, Object, Array };

  void require(Kind kind, const char* op) const {
    if (kind_ != kind) throw config_error(std::string("json: ") + op + " on wrong value kind");
  }

  static void write_escaped(std::string& out, const std::string& s) {
    out.push_back('"');
    for (const char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out.push_back(c);
          }
      }
    }
    out.push_back('"');
  }

  static void write_number(std::string& out, double x) {
    if (!std::isfinite(x)) {
      out += std::signbit(x) && !std::isnan(x) ? "\"-inf\"" : (std::isnan(x) ? "\"nan\"" : "\"inf\"");
      return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
  }

  void write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (kind_) {
      case Kind::Null: out += "null"; break;
      case Kind::Bool: out += bool_ ? "true" : "false"; break;
      case Kind::Integer: out += std::to_string(int_); break;
      case Kind::Number: write_number(out, num_); break;
      case Kind::String: write_escaped(out, str_); break;
      case Kind::Object: {
        if (members_.empty()) {
          out += "{}";
          break;
        }
        out += "{\n";
        for (std::size_t i = 0; i < members_.size(); ++i) {
          out += pad;
          write_escaped(out, members_[i].first);
          out += ": ";
          members_[i].second.write(out, indent, depth + 1);
          if (i + 1 < members_.size()) out.push_back(',');
          out.push_back('\n');
        }
        out += close_pad;
        out.push_back('}');
        break;
      }
      case Kind::Array: {
        if (items_.empty()) {
          out += "[]";
          break;
        }
        out += "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad;
          items_[i].write(out, indent, depth + 1);
          if (i + 1 < items_.size()) out.push_back(',');
          out.push_back('\n');
        }
        out += close_pad;
        out.push_back(']');
        break;
      }
    }
  }

  Kind kind_;
  double num_ = 0;
  long long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, Value>> members_;
  std::vector<Value> items_;
};

}  // namespace json
}  // namespace isoblock
