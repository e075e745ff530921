#pragma once

#include <map>
#include <string>
#include <vector>

namespace progtr {

/// Flat key=value file with [section] headers; '#' starts a comment.
/// Lookups use "section.key". Getters mark entries as read so callers can
/// reject unknown keys with their line numbers afterwards.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& label = "<config>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    /// Comma-separated doubles.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    /// Comma-separated strings, trimmed.
    std::vector<std::string> get_strings(const std::string& key,
                                         const std::vector<std::string>& fallback) const;

    /// "key (line N)" for every entry no getter has touched.
    std::vector<std::string> unused_keys() const;
    int line_of(const std::string& key) const;
    const std::string& label() const { return label_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };
    std::string label_;
    std::map<std::string, Entry> entries_;
};

/// "lo:hi:step" (inclusive of hi) or a comma list of dB values.
std::vector<double> parse_snr_grid(const std::string& text);

} // namespace progtr
