#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "socialtopk/common.hpp"

namespace socialtopk {

struct Triple {
    UserId user;
    ItemId item;
    TagId tag;

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct Posting {
    ItemId item;
    std::uint32_t tf;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct IngestReport {
    std::size_t triples_read = 0;
    std::size_t duplicates_dropped = 0;
    std::size_t distinct_users = 0;
    std::size_t distinct_items = 0;
    std::size_t distinct_tags = 0;
};

/// Deduplicated Tagged(user, item, tag) relation with the two access paths the
/// top-k engines need: user lists per (user, tag) and per-tag inverted lists
/// sorted by tf descending, then item id ascending.
class TaggingStore {
public:
    TaggingStore() = default;

    /// Sizes are lower bounds; they grow to cover every id in `triples`.
    TaggingStore(std::vector<Triple> triples, std::size_t num_users = 0, std::size_t num_items = 0,
                 std::size_t num_tags = 0);

    TaggingStore(const TaggingStore& other);
    TaggingStore& operator=(const TaggingStore& other);
    TaggingStore(TaggingStore&&) noexcept;
    TaggingStore& operator=(TaggingStore&&) noexcept;

    const IngestReport& report() const noexcept { return report_; }

    std::size_t num_users() const noexcept { return num_users_; }
    std::size_t num_items() const noexcept { return num_items_; }
    std::size_t num_tags() const noexcept { return inverted_offsets_.empty() ? 0 : inverted_offsets_.size() - 1; }
    std::size_t num_triples() const noexcept { return triples_.size(); }

    /// Sorted (user, item, tag) triples.
    std::span<const Triple> triples() const noexcept { return triples_; }

    /// Items tagged by `user` with `tag`, ascending item id.
    std::span<const ItemId> user_list(UserId user, TagId tag) const;

    /// Distinct tags a user applied.
    std::size_t distinct_tags_of(UserId user) const;

    std::span<const Posting> inverted_list(TagId tag) const;

    /// Number of distinct items carrying `tag` (n_t in idf).
    std::size_t items_with_tag(TagId tag) const { return inverted_list(tag).size(); }

    /// Number of triples carrying `tag`.
    std::size_t tag_uses(TagId tag) const;

    /// Random-access tf lookup. Only oracles may call this; every call is
    /// counted so tests can assert the sequential-only engines never do.
    std::uint32_t tf(TagId tag, ItemId item) const;

    std::uint64_t random_accesses() const noexcept { return random_accesses_.load(); }

private:
    struct UserEntry {
        TagId tag;
        ItemId item;
    };

    std::vector<Triple> triples_;
    std::size_t num_users_ = 0;
    std::size_t num_items_ = 0;
    // Per user: (tag, item) sorted by tag then item.
    std::vector<std::size_t> user_offsets_;
    std::vector<ItemId> user_items_;
    std::vector<TagId> user_tags_;
    std::vector<std::size_t> inverted_offsets_;
    std::vector<Posting> postings_;
    IngestReport report_;
    mutable std::atomic<std::uint64_t> random_accesses_{0};
};

/// Strictly sequential reader over one inverted list. The consumed prefix is
/// CIL(t); top_tf() of a spent cursor is 0.
class InvertedCursor {
public:
    InvertedCursor() = default;
    explicit InvertedCursor(std::span<const Posting> list) : list_(list) {}

    bool spent() const noexcept { return position_ >= list_.size(); }
    std::size_t position() const noexcept { return position_; }

    /// Head item; only meaningful when !spent().
    ItemId top_item() const noexcept { return spent() ? ItemId{0} : list_[position_].item; }
    std::uint32_t top_tf() const noexcept { return spent() ? 0u : list_[position_].tf; }

    /// Consumes the head. nullopt signals end of list.
    std::optional<Posting> advance() {
        if (spent()) return std::nullopt;
        return list_[position_++];
    }

    std::span<const Posting> consumed() const noexcept { return list_.first(position_); }

    /// First entry without consuming it (list maximum); 0 for an empty list.
    std::uint32_t max_tf() const noexcept { return list_.empty() ? 0u : list_.front().tf; }
    bool empty_list() const noexcept { return list_.empty(); }

private:
    std::span<const Posting> list_;
    std::size_t position_ = 0;
};

}  // namespace socialtopk
