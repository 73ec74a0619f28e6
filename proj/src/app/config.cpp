#include "flexo/app/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace flexo::app {

bool ConfigValue::operator==(const ConfigValue& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Number: return num == o.num;
        case Kind::String: return str == o.str;
        case Kind::Boolean: return boolean == o.boolean;
        case Kind::Array: return array == o.array;
    }
    return false;
}

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::runtime_error("config, line " + std::to_string(line) + ": " + msg);
}

struct ValueParser {
    const char* s;
    const char* end;
    int line;

    void skip() {
        while (s < end && (*s == ' ' || *s == '\t')) ++s;
    }
    ConfigValue parse() {
        skip();
        if (s >= end) fail(line, "missing value");
        if (*s == '"') {
            ++s;
            std::string out;
            while (s < end && *s != '"') out.push_back(*s++);
            if (s >= end) fail(line, "unterminated string");
            ++s;
            ConfigValue v;
            v.kind = ConfigValue::Kind::String;
            v.str = out;
            return v;
        }
        if (*s == '[') {
            ++s;
            ConfigValue v;
            v.kind = ConfigValue::Kind::Array;
            skip();
            if (s < end && *s == ']') {
                ++s;
                return v;
            }
            for (;;) {
                v.array.push_back(parse());
                skip();
                if (s < end && *s == ',') {
                    ++s;
                    continue;
                }
                if (s < end && *s == ']') {
                    ++s;
                    return v;
                }
                fail(line, "expected ',' or ']' in array");
            }
        }
        if (std::strncmp(s, "true", 4) == 0 && (s + 4 == end || !std::isalnum(static_cast<unsigned char>(s[4])))) {
            s += 4;
            ConfigValue v;
            v.kind = ConfigValue::Kind::Boolean;
            v.boolean = true;
            return v;
        }
        if (std::strncmp(s, "false", 5) == 0 && (s + 5 == end || !std::isalnum(static_cast<unsigned char>(s[5])))) {
            s += 5;
            ConfigValue v;
            v.kind = ConfigValue::Kind::Boolean;
            v.boolean = false;
            return v;
        }
        char* out = nullptr;
        const double d = std::strtod(s, &out);
        if (out == s) fail(line, "cannot parse value");
        s = out;
        ConfigValue v;
        v.kind = ConfigValue::Kind::Number;
        v.num = d;
        return v;
    }
};

std::string strip(const std::string& in) {
    std::size_t a = in.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = in.find_last_not_of(" \t\r\n");
    return in.substr(a, b - a + 1);
}

// Remove a '#' comment that is not inside a quoted string.
std::string strip_comment(const std::string& in) {
    bool quoted = false;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == '"') quoted = !quoted;
        if (in[i] == '#' && !quoted) return in.substr(0, i);
    }
    return in;
}

void serialize_value(const ConfigValue& v, std::string& out) {
    char buf[64];
    switch (v.kind) {
        case ConfigValue::Kind::Number:
            std::snprintf(buf, sizeof buf, "%.17g", v.num);
            out += buf;
            break;
        case ConfigValue::Kind::String:
            out += '"';
            out += v.str;
            out += '"';
            break;
        case ConfigValue::Kind::Boolean:
            out += v.boolean ? "true" : "false";
            break;
        case ConfigValue::Kind::Array:
            out += '[';
            for (std::size_t i = 0; i < v.array.size(); ++i) {
                if (i) out += ", ";
                serialize_value(v.array[i], out);
            }
            out += ']';
            break;
    }
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const std::string line = strip(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "bad section header");
            section = strip(line.substr(1, line.size() - 2));
            if (section.empty()) fail(line_no, "empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        const std::string key = strip(line.substr(0, eq));
        if (key.empty()) fail(line_no, "empty key");
        const std::string vs = line.substr(eq + 1);
        ValueParser vp{vs.data(), vs.data() + vs.size(), line_no};
        ConfigValue v = vp.parse();
        vp.skip();
        if (vp.s != vp.end) fail(line_no, "trailing characters after value");
        cfg.values_[section.empty() ? key : section + "." + key] = std::move(v);
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string RunConfig::serialize() const {
    std::string out;
    std::string cur_section;
    bool first = true;
    for (const auto& [path, v] : values_) {
        const std::size_t dot = path.rfind('.');
        const std::string section = dot == std::string::npos ? "" : path.substr(0, dot);
        const std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
        if (section != cur_section || first) {
            if (!section.empty()) {
                if (!first) out += "\n";
                out += "[" + section + "]\n";
            }
            cur_section = section;
        }
        first = false;
        out += key + " = ";
        serialize_value(v, out);
        out += "\n";
    }
    return out;
}

const ConfigValue* RunConfig::find(const std::string& path) const {
    auto it = values_.find(path);
    return it == values_.end() ? nullptr : &it->second;
}

double RunConfig::number(const std::string& path, std::optional<double> fallback) const {
    const ConfigValue* v = find(path);
    if (!v) {
        if (fallback) return *fallback;
        throw std::runtime_error("config: missing required number '" + path + "'");
    }
    if (v->kind != ConfigValue::Kind::Number) throw std::runtime_error("config: '" + path + "' must be a number");
    return v->num;
}

std::string RunConfig::str(const std::string& path, std::optional<std::string> fallback) const {
    const ConfigValue* v = find(path);
    if (!v) {
        if (fallback) return *fallback;
        throw std::runtime_error("config: missing required string '" + path + "'");
    }
    if (v->kind != ConfigValue::Kind::String) throw std::runtime_error("config: '" + path + "' must be a string");
    return v->str;
}

bool RunConfig::boolean(const std::string& path, std::optional<bool> fallback) const {
    const ConfigValue* v = find(path);
    if (!v) {
        if (fallback) return *fallback;
        throw std::runtime_error("config: missing required boolean '" + path + "'");
    }
    if (v->kind != ConfigValue::Kind::Boolean) throw std::runtime_error("config: '" + path + "' must be a boolean");
    return v->boolean;
}

std::vector<double> RunConfig::numbers(const std::string& path,
                                       std::optional<std::vector<double>> fallback) const {
    const ConfigValue* v = find(path);
    if (!v) {
        if (fallback) return *fallback;
        throw std::runtime_error("config: missing required array '" + path + "'");
    }
    if (v->kind != ConfigValue::Kind::Array) throw std::runtime_error("config: '" + path + "' must be an array");
    std::vector<double> out;
    for (const ConfigValue& e : v->array) {
        if (e.kind != ConfigValue::Kind::Number)
            throw std::runtime_error("config: '" + path + "' must hold numbers");
        out.push_back(e.num);
    }
    return out;
}

std::vector<std::string> RunConfig::strings(const std::string& path,
                                            std::optional<std::vector<std::string>> fallback) const {
    const ConfigValue* v = find(path);
    if (!v) {
        if (fallback) return *fallback;
        throw std::runtime_error("config: missing required array '" + path + "'");
    }
    if (v->kind != ConfigValue::Kind::Array) throw std::runtime_error("config: '" + path + "' must be an array");
    std::vector<std::string> out;
    for (const ConfigValue& e : v->array) {
        if (e.kind != ConfigValue::Kind::String)
            throw std::runtime_error("config: '" + path + "' must hold strings");
        out.push_back(e.str);
    }
    return out;
}

std::vector<std::string> RunConfig::children(const std::string& prefix) const {
    std::set<std::string> names;
    const std::string p = prefix + ".";
    for (const auto& [path, v] : values_) {
        if (path.compare(0, p.size(), p) != 0) continue;
        const std::string rest = path.substr(p.size());
        const std::size_t dot = rest.find('.');
        names.insert(dot == std::string::npos ? rest : rest.substr(0, dot));
    }
    return {names.begin(), names.end()};
}

}  // namespace flexo::app
