// SPDX-License-Identifier: Apache-2.0
#include "cylsh/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cylsh {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& msg)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + msg : source + ": " + msg),
      line_(line)
{
}

double parse_double(const std::string& s)
{
    const std::string t = trim(s);
    double v = 0.0;
    const auto* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || p != end) throw std::invalid_argument("expected a number, got '" + s + "'");
    return v;
}

long long parse_int(const std::string& s)
{
    const std::string t = trim(s);
    long long v = 0;
    const auto* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || p != end)
        throw std::invalid_argument("expected an integer, got '" + s + "'");
    return v;
}

std::vector<double> parse_double_list(const std::string& s)
{
    std::string t = s;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream is(t);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(parse_double(tok));
    return out;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Config Config::parse(const std::string& text, const std::string& source)
{
    Config c;
    c.source_ = source;
    std::istringstream is(text);
    std::string raw, section;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(source, lineno, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(source, lineno, "expected key = value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(source, lineno, "empty key");
        if (section.empty()) throw ConfigError(source, lineno, "key '" + key + "' outside any [section]");
        c.entries_.push_back({section, key, trim(line.substr(eq + 1)), lineno});
    }
    return c;
}

Config Config::load(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw ConfigError(path, 0, "cannot open config file");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
}

void Config::require_known(const std::map<std::string, std::set<std::string>>& allowed) const
{
    for (const auto& e : entries_) {
        auto it = allowed.find(e.section);
        if (it == allowed.end()) throw ConfigError(source_, e.line, "unknown section [" + e.section + "]");
        if (!it->second.count(e.key))
            throw ConfigError(source_, e.line, "unknown key '" + e.key + "' in [" + e.section + "]");
    }
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

const Config::Entry* Config::find(const std::string& section, const std::string& key) const
{
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->section == section && it->key == key) return &*it;
    return nullptr;
}

std::vector<const Config::Entry*> Config::all(const std::string& section, const std::string& key) const
{
    std::vector<const Entry*> out;
    for (const auto& e : entries_)
        if (e.section == section && e.key == key) out.push_back(&e);
    return out;
}

void Config::fail(const Entry& e, const std::string& msg) const
{
    throw ConfigError(source_, e.line, e.section + "." + e.key + ": " + msg);
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& def) const
{
    const auto* e = find(section, key);
    return e ? e->value : def;
}

double Config::get_double(const std::string& section, const std::string& key, double def) const
{
    const auto* e = find(section, key);
    if (!e) return def;
    try {
        return parse_double(e->value);
    } catch (const std::exception& ex) {
        fail(*e, ex.what());
    }
}

long long Config::get_int(const std::string& section, const std::string& key, long long def) const
{
    const auto* e = find(section, key);
    if (!e) return def;
    try {
        return parse_int(e->value);
    } catch (const std::exception& ex) {
        fail(*e, ex.what());
    }
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key, std::uint64_t def) const
{
    const auto* e = find(section, key);
    if (!e) return def;
    std::uint64_t v = 0;
    const auto& s = e->value;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        fail(*e, "expected an unsigned 64-bit integer, got '" + s + "'");
    return v;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool def) const
{
    const auto* e = find(section, key);
    if (!e) return def;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    fail(*e, "expected a boolean, got '" + e->value + "'");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        const std::vector<double>& def) const
{
    const auto* e = find(section, key);
    if (!e) return def;
    try {
        return parse_double_list(e->value);
    } catch (const std::exception& ex) {
        fail(*e, ex.what());
    }
}

std::vector<int> Config::get_ints(const std::string& section, const std::string& key,
                                  const std::vector<int>& def) const
{
    const auto* e = find(section, key);
    if (!e) return def;
    std::string t = e->value;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream is(t);
    std::vector<int> out;
    std::string tok;
    try {
        while (is >> tok) out.push_back(static_cast<int>(parse_int(tok)));
    } catch (const std::exception& ex) {
        fail(*e, ex.what());
    }
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value)
{
    for (auto& e : entries_)
        if (e.section == section && e.key == key) {
            e.value = value;
            return;
        }
    entries_.push_back({section, key, value, 0});
}

std::string Config::dump() const
{
    std::vector<std::string> order;
    for (const auto& e : entries_)
        if (std::find(order.begin(), order.end(), e.section) == order.end()) order.push_back(e.section);
    std::ostringstream os;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i) os << '\n';
        os << '[' << order[i] << "]\n";
        for (const auto& e : entries_)
            if (e.section == order[i]) os << e.key << " = " << e.value << '\n';
    }
    return os.str();
}

}  // namespace cylsh
