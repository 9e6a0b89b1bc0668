#include "socialtopk/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace socialtopk {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return fields;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

std::vector<std::string> sorted_unique(std::set<std::string>&& names) {
    return {std::make_move_iterator(names.begin()), std::make_move_iterator(names.end())};
}

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    return buf;
}

}  // namespace

Dictionary::Dictionary(std::vector<std::string> sorted_unique_names) : names_(std::move(sorted_unique_names)) {
    ids_.reserve(names_.size());
    for (std::uint32_t i = 0; i < names_.size(); ++i) ids_.emplace(names_[i], i);
}

std::optional<std::uint32_t> Dictionary::find(std::string_view name) const {
    const auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t Dictionary::at(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw NotFoundError("unknown name '" + std::string(name) + "'");
}

std::vector<RawTriple> parse_tagging_log(std::istream& in, const std::string& source) {
    std::vector<RawTriple> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view view = strip_cr(line);
        if (view.empty()) continue;
        const auto fields = split_tabs(view);
        if (fields.size() < 3 || fields.size() > 4) {
            throw ParseError(source, lineno, "expected user<TAB>item<TAB>tag[<TAB>timestamp]");
        }
        if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            throw ParseError(source, lineno, "empty field");
        }
        out.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2])});
    }
    return out;
}

std::vector<RawEdge> parse_network(std::istream& in, const std::string& source) {
    std::vector<RawEdge> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view view = strip_cr(line);
        if (view.empty()) continue;
        const auto fields = split_tabs(view);
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
            throw ParseError(source, lineno, "expected u<TAB>v<TAB>w");
        }
        double w = 0.0;
        const auto* begin = fields[2].data();
        const auto* end = begin + fields[2].size();
        const auto [ptr, ec] = std::from_chars(begin, end, w);
        if (ec != std::errc() || ptr != end) {
            throw ParseError(source, lineno, "weight '" + std::string(fields[2]) + "' is not a number");
        }
        if (!(w > 0.0 && w <= 1.0)) {
            throw ParseError(source, lineno, "weight " + std::string(fields[2]) + " outside (0,1]");
        }
        if (fields[0] == fields[1]) throw ParseError(source, lineno, "self-loop");
        out.push_back({std::string(fields[0]), std::string(fields[1]), w});
    }
    return out;
}

std::vector<TagId> Corpus::resolve_tags(std::span<const std::string> names) const {
    std::vector<TagId> ids;
    ids.reserve(names.size());
    for (const auto& n : names) ids.push_back(tags.find(n).value_or(kUnknownTag));
    return ids;
}

Corpus build_corpus(std::span<const RawTriple> triples, std::span<const RawEdge> edges) {
    std::set<std::string> user_names, item_names, tag_names;
    for (const auto& t : triples) {
        user_names.insert(t.user);
        item_names.insert(t.item);
        tag_names.insert(t.tag);
    }
    for (const auto& e : edges) {
        user_names.insert(e.u);
        user_names.insert(e.v);
    }
    Corpus c;
    c.users = Dictionary(sorted_unique(std::move(user_names)));
    c.items = Dictionary(sorted_unique(std::move(item_names)));
    c.tags = Dictionary(sorted_unique(std::move(tag_names)));

    std::vector<Triple> ids;
    ids.reserve(triples.size());
    for (const auto& t : triples) {
        ids.push_back({c.users.at(t.user), c.items.at(t.item), c.tags.at(t.tag)});
    }
    c.store = TaggingStore(std::move(ids), c.users.size(), c.items.size(), c.tags.size());

    std::vector<Edge> edge_ids;
    edge_ids.reserve(edges.size());
    for (const auto& e : edges) edge_ids.push_back({c.users.at(e.u), c.users.at(e.v), e.weight});
    c.network = SocialNetwork(c.users.size(), edge_ids);
    return c;
}

Corpus load_corpus(const std::filesystem::path& network_file, const std::filesystem::path& tagging_log) {
    std::vector<RawTriple> triples;
    std::vector<RawEdge> edges;
    if (!tagging_log.empty()) {
        std::ifstream in(tagging_log);
        if (!in) throw ConfigError("cannot open tagging log " + tagging_log.string());
        triples = parse_tagging_log(in, tagging_log.string());
    }
    if (!network_file.empty()) {
        std::ifstream in(network_file);
        if (!in) throw ConfigError("cannot open network file " + network_file.string());
        edges = parse_network(in, network_file.string());
    }
    return build_corpus(triples, edges);
}

void write_network(std::ostream& out, const SocialNetwork& network, const Dictionary& users) {
    for (const Edge& e : network.edges()) {
        out << users.name(e.u) << '\t' << users.name(e.v) << '\t' << format_weight(e.weight) << '\n';
    }
}

void write_tagging_log(std::ostream& out, const Corpus& corpus) {
    for (const Triple& t : corpus.store.triples()) {
        out << corpus.users.name(t.user) << '\t' << corpus.items.name(t.item) << '\t'
            << corpus.tags.name(t.tag) << '\n';
    }
}

}  // namespace socialtopk
