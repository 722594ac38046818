#include "spine3/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace spine3 {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

std::string format_double17(double d) {
    if (std::isnan(d))
        return "\"nan\"";
    if (std::isinf(d))
        return d > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue val) {
    auto& obj = std::get<Object>(v_);
    obj.emplace_back(key, std::move(val));
    return *this;
}

JsonValue& JsonValue::push(JsonValue val) {
    auto& arr = std::get<Array>(v_);
    arr.push_back(std::move(val));
    return *this;
}

void JsonValue::write(std::string& out, int indent, int depth) const {
    auto pad = [&](int d) {
        if (indent > 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    if (std::holds_alternative<std::nullptr_t>(v_)) {
        out += "null";
    } else if (std::holds_alternative<bool>(v_)) {
        out += std::get<bool>(v_) ? "true" : "false";
    } else if (std::holds_alternative<long long>(v_)) {
        out += std::to_string(std::get<long long>(v_));
    } else if (std::holds_alternative<double>(v_)) {
        out += format_double17(std::get<double>(v_));
    } else if (std::holds_alternative<std::string>(v_)) {
        out += '"';
        out += json_escape(std::get<std::string>(v_));
        out += '"';
    } else if (std::holds_alternative<Array>(v_)) {
        const auto& arr = std::get<Array>(v_);
        if (arr.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (i)
                out += ',';
            pad(depth + 1);
            arr[i].write(out, indent, depth + 1);
        }
        pad(depth);
        out += ']';
    } else {
        const auto& obj = std::get<Object>(v_);
        if (obj.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        for (std::size_t i = 0; i < obj.size(); ++i) {
            if (i)
                out += ',';
            pad(depth + 1);
            out += '"';
            out += json_escape(obj[i].first);
            out += "\":";
            if (indent > 0)
                out += ' ';
            obj[i].second.write(out, indent, depth + 1);
        }
        pad(depth);
        out += '}';
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    return out;
}

} // namespace spine3
