// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cylsh {

/// Parse or validation failure tied to a source line (0 when not applicable).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& msg);
    int line() const { return line_; }

private:
    int line_;
};

/// Line-oriented `key = value` text with `[section]` headers and `#` comments.
/// Keys may repeat (e.g. one `ellipse` line per shape); lookups of scalar keys
/// take the last occurrence.
class Config {
public:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        int line = 0;
    };

    static Config parse(const std::string& text, const std::string& source = "<config>");
    static Config load(const std::string& path);

    const std::string& source() const { return source_; }
    const std::vector<Entry>& entries() const { return entries_; }

    /// Throws ConfigError at the first key not in `allowed[section]` or in an
    /// unknown section.
    void require_known(const std::map<std::string, std::set<std::string>>& allowed) const;

    bool has(const std::string& section, const std::string& key) const;
    const Entry* find(const std::string& section, const std::string& key) const;
    std::vector<const Entry*> all(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key, const std::string& def) const;
    double get_double(const std::string& section, const std::string& key, double def) const;
    long long get_int(const std::string& section, const std::string& key, long long def) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t def) const;
    bool get_bool(const std::string& section, const std::string& key, bool def) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    const std::vector<double>& def) const;
    std::vector<int> get_ints(const std::string& section, const std::string& key, const std::vector<int>& def) const;

    /// Sets (or appends) a key; used to record resolved values.
    void set(const std::string& section, const std::string& key, const std::string& value);

    /// Canonical text: sections in first-appearance order, entries in order.
    std::string dump() const;

    [[noreturn]] void fail(const Entry& e, const std::string& msg) const;

private:
    std::string source_;
    std::vector<Entry> entries_;
};

double parse_double(const std::string& s);
long long parse_int(const std::string& s);
std::vector<double> parse_double_list(const std::string& s);
std::string format_double(double v);

}  // namespace cylsh
