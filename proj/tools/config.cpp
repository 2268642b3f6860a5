#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "hybrid/error.hpp"

namespace hybrid::cli {

namespace {

template <typename T>
T parse_value(const std::string& section, const std::string& key, const std::string& text)
{
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ValidationError("config [" + section + "] " + key + ": '" + text + "' is not a valid number");
    }
    return value;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& text)
{
    if (text == "true" || text == "yes" || text == "on" || text == "1") {
        return true;
    }
    if (text == "false" || text == "no" || text == "off" || text == "0") {
        return false;
    }
    throw ValidationError("config [" + section + "] " + key + ": '" + text + "' is not a boolean");
}

[[noreturn]] void unknown_key(const std::string& section, const std::string& key)
{
    throw ValidationError("config: unknown key '" + key + "' in section [" + section + "]");
}

}  // namespace

std::vector<std::size_t> parse_cutoffs(const std::string& text)
{
    std::vector<std::size_t> cutoffs;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) {
            comma = text.size();
        }
        auto item = text.substr(pos, comma - pos);
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        cutoffs.push_back(parse_value<std::size_t>("eval", "cutoffs", item));
        pos = comma + 1;
    }
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] == 0 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
            throw ValidationError("cutoffs must be positive and strictly increasing, got '" + text + "'");
        }
    }
    return cutoffs;
}

void AppConfig::validate() const
{
    if (cutoffs.empty()) {
        throw ValidationError("at least one cutoff is required");
    }
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] == 0 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
            throw ValidationError("cutoffs must be positive and strictly increasing");
        }
    }
    if (k == 0 || rr_cutoff == 0 || bins == 0) {
        throw ValidationError("k, rr_cutoff and bins must be positive");
    }
    if (!(tune_step > 0.0 && tune_step <= 1.0)) {
        throw ValidationError("tuning step must lie in (0, 1]");
    }
    bm25.validate();
}

AppConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ParseError(path.string() + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    AppConfig config;
    for (const auto& [section, entries] : tree) {
        if (!entries.data().empty()) {
            throw ValidationError("config: key '" + section + "' must sit inside a section");
        }
        if (section == "fusion") {
            std::map<std::string, std::string> values;
            for (const auto& [key, node] : entries) {
                values[key] = node.data();
            }
            config.fusion = parse_fusion_spec(values);
            continue;
        }
        for (const auto& [key, node] : entries) {
            const std::string& value = node.data();
            if (section == "paths") {
                if (key == "corpus") {
                    config.corpus = value;
                } else if (key == "queries") {
                    config.queries = value;
                } else if (key == "qrels") {
                    config.qrels = value;
                } else if (key == "output_dir") {
                    config.output_dir = value;
                } else {
                    unknown_key(section, key);
                }
            } else if (section == "search") {
                if (key != "k") {
                    unknown_key(section, key);
                }
                config.k = parse_value<std::size_t>(section, key, value);
            } else if (section == "bm25") {
                if (key == "k1") {
                    config.bm25.k1 = parse_value<double>(section, key, value);
                } else if (key == "b") {
                    config.bm25.b = parse_value<double>(section, key, value);
                } else {
                    unknown_key(section, key);
                }
            } else if (section == "eval") {
                if (key == "cutoffs") {
                    config.cutoffs = parse_cutoffs(value);
                } else if (key == "rr_cutoff") {
                    config.rr_cutoff = parse_value<std::size_t>(section, key, value);
                } else {
                    unknown_key(section, key);
                }
            } else if (section == "vectors") {
                if (key != "cosine") {
                    unknown_key(section, key);
                }
                config.cosine = parse_bool(section, key, value);
            } else if (section == "tune") {
                if (key == "step") {
                    config.tune_step = parse_value<double>(section, key, value);
                } else if (key == "metric") {
                    config.tune_metric = value;
                } else {
                    unknown_key(section, key);
                }
            } else if (section == "analysis") {
                if (key == "seed") {
                    config.seed = parse_value<std::uint64_t>(section, key, value);
                } else if (key == "bins") {
                    config.bins = parse_value<std::size_t>(section, key, value);
                } else if (key == "positives") {
                    config.positives = parse_value<std::size_t>(section, key, value);
                } else if (key == "negatives") {
                    config.negatives = parse_value<std::size_t>(section, key, value);
                } else {
                    unknown_key(section, key);
                }
            } else {
                throw ValidationError("config: unknown section [" + section + "]");
            }
        }
    }
    // Relative paths are relative to the config file.
    for (auto* p : {&config.corpus, &config.queries, &config.qrels, &config.output_dir}) {
        if (!p->empty() && p->is_relative()) {
            *p = path.parent_path() / *p;
        }
    }
    config.validate();
    return config;
}

}  // namespace hybrid::cli
