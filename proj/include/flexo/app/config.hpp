#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flexo::app {

struct ConfigValue {
    enum class Kind { Number, String, Boolean, Array };
    Kind kind = Kind::Number;
    double num = 0;
    std::string str;
    bool boolean = false;
    std::vector<ConfigValue> array;

    bool operator==(const ConfigValue& o) const;
};

/// Run configuration: a TOML-like structured text parsed into a flat
/// dotted-path map ([a.b] section + "k = v" gives key "a.b.k"). Values are
/// numbers, quoted strings, booleans and (nested) arrays. Typed getters
/// throw validation errors carrying the field path.
class RunConfig {
public:
    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);
    std::string serialize() const;

    bool operator==(const RunConfig& o) const { return values_ == o.values_; }

    bool has(const std::string& path) const { return values_.count(path) > 0; }
    double number(const std::string& path, std::optional<double> fallback = {}) const;
    std::string str(const std::string& path, std::optional<std::string> fallback = {}) const;
    bool boolean(const std::string& path, std::optional<bool> fallback = {}) const;
    std::vector<double> numbers(const std::string& path, std::optional<std::vector<double>> fallback = {}) const;
    std::vector<std::string> strings(const std::string& path,
                                     std::optional<std::vector<std::string>> fallback = {}) const;

    /// Distinct immediate child names under "prefix." (e.g. region labels
    /// under "bc.region").
    std::vector<std::string> children(const std::string& prefix) const;

    void set(const std::string& path, ConfigValue v) { values_[path] = std::move(v); }
    const std::map<std::string, ConfigValue>& values() const { return values_; }

private:
    const ConfigValue* find(const std::string& path) const;
    std::map<std::string, ConfigValue> values_;
};

}  // namespace flexo::app
