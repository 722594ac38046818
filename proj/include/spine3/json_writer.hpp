#pragma once

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace spine3 {

// Minimal JSON document builder with deterministic output: object keys keep
// insertion order and every floating point number is printed with 17
// significant digits, so identical runs serialize byte-identically.
class JsonValue {
  public:
    using Array = std::vector<JsonValue>;
    using Object = std::vector<std::pair<std::string, JsonValue>>;

    JsonValue() : v_(nullptr) {}
    JsonValue(std::nullptr_t) : v_(nullptr) {}
    JsonValue(bool b) : v_(b) {}
    JsonValue(int i) : v_(static_cast<long long>(i)) {}
    JsonValue(long i) : v_(static_cast<long long>(i)) {}
    JsonValue(long long i) : v_(i) {}
    JsonValue(double d) : v_(d) {}
    JsonValue(const char* s) : v_(std::string(s)) {}
    JsonValue(std::string s) : v_(std::move(s)) {}
    JsonValue(Array a) : v_(std::move(a)) {}
    JsonValue(Object o) : v_(std::move(o)) {}

    static JsonValue object() { return JsonValue(Object{}); }
    static JsonValue array() { return JsonValue(Array{}); }

    JsonValue& set(const std::string& key, JsonValue val);
    JsonValue& push(JsonValue val);

    std::string dump(int indent = 0) const;

  private:
    std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object> v_;

    void write(std::string& out, int indent, int depth) const;
};

std::string json_escape(const std::string& s);
std::string format_double17(double d);

} // namespace spine3
