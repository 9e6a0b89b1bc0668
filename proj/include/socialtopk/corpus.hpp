#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "socialtopk/graph.hpp"
#include "socialtopk/store.hpp"

namespace socialtopk {

/// Bidirectional name <-> dense id map. Ids follow lexicographic name order
/// when built through build_corpus, so id order is a stable tie-breaker.
class Dictionary {
public:
    Dictionary() = default;
    explicit Dictionary(std::vector<std::string> sorted_unique_names);

    std::optional<std::uint32_t> find(std::string_view name) const;
    /// Throws NotFoundError.
    std::uint32_t at(std::string_view name) const;
    const std::string& name(std::uint32_t id) const { return names_.at(id); }
    std::size_t size() const noexcept { return names_.size(); }
    std::span<const std::string> names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

struct RawTriple {
    std::string user;
    std::string item;
    std::string tag;
};

struct RawEdge {
    std::string u;
    std::string v;
    double weight;
};

/// `user<TAB>item<TAB>tag[<TAB>timestamp]` per line; blank lines skipped.
std::vector<RawTriple> parse_tagging_log(std::istream& in, const std::string& source = "tagging log");

/// `u<TAB>v<TAB>w` per line, w in (0,1].
std::vector<RawEdge> parse_network(std::istream& in, const std::string& source = "network");

/// Network, tagging store, and the dictionaries tying them to external names.
/// The user id space is shared between the network and the store.
struct Corpus {
    Dictionary users;
    Dictionary items;
    Dictionary tags;
    SocialNetwork network;
    TaggingStore store;

    /// Query tag ids; names absent from the dictionary map to kUnknownTag.
    std::vector<TagId> resolve_tags(std::span<const std::string> names) const;
};

/// Duplicate triples are dropped (see store.report()); duplicate or
/// self-loop edges throw DomainError.
Corpus build_corpus(std::span<const RawTriple> triples, std::span<const RawEdge> edges);

/// Either path may be empty to load only the other half.
Corpus load_corpus(const std::filesystem::path& network_file, const std::filesystem::path& tagging_log);

void write_network(std::ostream& out, const SocialNetwork& network, const Dictionary& users);
void write_tagging_log(std::ostream& out, const Corpus& corpus);

}  // namespace socialtopk
