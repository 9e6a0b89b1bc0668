#include "socialtopk/store.hpp"

#include <algorithm>

namespace socialtopk {

TaggingStore::TaggingStore(std::vector<Triple> triples, std::size_t num_users,
                           std::size_t num_items, std::size_t num_tags) {
    report_.triples_read = triples.size();
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    report_.duplicates_dropped = report_.triples_read - triples.size();
    triples_ = std::move(triples);

    for (const Triple& t : triples_) {
        num_users = std::max<std::size_t>(num_users, t.user + 1);
        num_items = std::max<std::size_t>(num_items, t.item + 1);
        num_tags = std::max<std::size_t>(num_tags, t.tag + 1);
    }
    num_users_ = num_users;
    num_items_ = num_items;

    // User lists: triples_ is sorted by (user, item, tag); regroup per user by tag.
    user_offsets_.assign(num_users + 1, 0);
    for (const Triple& t : triples_) ++user_offsets_[t.user + 1];
    for (std::size_t u = 0; u < num_users; ++u) user_offsets_[u + 1] += user_offsets_[u];
    std::vector<UserEntry> entries;
    entries.reserve(triples_.size());
    for (const Triple& t : triples_) entries.push_back({t.tag, t.item});
    for (std::size_t u = 0; u < num_users; ++u) {
        std::sort(entries.begin() + static_cast<std::ptrdiff_t>(user_offsets_[u]),
                  entries.begin() + static_cast<std::ptrdiff_t>(user_offsets_[u + 1]),
                  [](const UserEntry& a, const UserEntry& b) {
                      return a.tag != b.tag ? a.tag < b.tag : a.item < b.item;
                  });
    }
    user_items_.reserve(entries.size());
    user_tags_.reserve(entries.size());
    for (const UserEntry& e : entries) {
        user_tags_.push_back(e.tag);
        user_items_.push_back(e.item);
    }

    // Inverted lists: tf(t, i) = number of distinct users with (., i, t).
    std::vector<std::pair<TagId, ItemId>> pairs;
    pairs.reserve(triples_.size());
    for (const Triple& t : triples_) pairs.emplace_back(t.tag, t.item);
    std::sort(pairs.begin(), pairs.end());
    inverted_offsets_.assign(num_tags + 1, 0);
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        postings_.push_back({pairs[i].second, static_cast<std::uint32_t>(j - i)});
        ++inverted_offsets_[pairs[i].first + 1];
        i = j;
    }
    for (std::size_t t = 0; t < num_tags; ++t) inverted_offsets_[t + 1] += inverted_offsets_[t];
    for (std::size_t t = 0; t < num_tags; ++t) {
        std::sort(postings_.begin() + static_cast<std::ptrdiff_t>(inverted_offsets_[t]),
                  postings_.begin() + static_cast<std::ptrdiff_t>(inverted_offsets_[t + 1]),
                  [](const Posting& a, const Posting& b) {
                      return a.tf != b.tf ? a.tf > b.tf : a.item < b.item;
                  });
    }

    std::vector<char> seen_users(num_users, 0), seen_items(num_items, 0), seen_tags(num_tags, 0);
    for (const Triple& t : triples_) {
        report_.distinct_users += !seen_users[t.user];
        report_.distinct_items += !seen_items[t.item];
        report_.distinct_tags += !seen_tags[t.tag];
        seen_users[t.user] = seen_items[t.item] = seen_tags[t.tag] = 1;
    }
}

TaggingStore::TaggingStore(const TaggingStore& other)
    : triples_(other.triples_),
      num_users_(other.num_users_),
      num_items_(other.num_items_),
      user_offsets_(other.user_offsets_),
      user_items_(other.user_items_),
      user_tags_(other.user_tags_),
      inverted_offsets_(other.inverted_offsets_),
      postings_(other.postings_),
      report_(other.report_) {}

TaggingStore& TaggingStore::operator=(const TaggingStore& other) {
    if (this != &other) {
        TaggingStore copy(other);
        *this = std::move(copy);
    }
    return *this;
}

TaggingStore::TaggingStore(TaggingStore&& other) noexcept
    : triples_(std::move(other.triples_)),
      num_users_(other.num_users_),
      num_items_(other.num_items_),
      user_offsets_(std::move(other.user_offsets_)),
      user_items_(std::move(other.user_items_)),
      user_tags_(std::move(other.user_tags_)),
      inverted_offsets_(std::move(other.inverted_offsets_)),
      postings_(std::move(other.postings_)),
      report_(other.report_),
      random_accesses_(other.random_accesses_.load()) {}

TaggingStore& TaggingStore::operator=(TaggingStore&& other) noexcept {
    triples_ = std::move(other.triples_);
    num_users_ = other.num_users_;
    num_items_ = other.num_items_;
    user_offsets_ = std::move(other.user_offsets_);
    user_items_ = std::move(other.user_items_);
    user_tags_ = std::move(other.user_tags_);
    inverted_offsets_ = std::move(other.inverted_offsets_);
    postings_ = std::move(other.postings_);
    report_ = other.report_;
    random_accesses_.store(other.random_accesses_.load());
    return *this;
}

std::span<const ItemId> TaggingStore::user_list(UserId user, TagId tag) const {
    if (user >= num_users_) return {};
    const auto first = user_tags_.begin() + static_cast<std::ptrdiff_t>(user_offsets_[user]);
    const auto last = user_tags_.begin() + static_cast<std::ptrdiff_t>(user_offsets_[user + 1]);
    const auto [lo, hi] = std::equal_range(first, last, tag);
    const auto begin = static_cast<std::size_t>(lo - user_tags_.begin());
    return {user_items_.data() + begin, static_cast<std::size_t>(hi - lo)};
}

std::size_t TaggingStore::distinct_tags_of(UserId user) const {
    if (user >= num_users_) return 0;
    std::size_t count = 0;
    for (std::size_t i = user_offsets_[user]; i < user_offsets_[user + 1]; ++i) {
        count += (i == user_offsets_[user] || user_tags_[i] != user_tags_[i - 1]);
    }
    return count;
}

std::span<const Posting> TaggingStore::inverted_list(TagId tag) const {
    if (tag >= num_tags()) return {};
    return {postings_.data() + inverted_offsets_[tag],
            inverted_offsets_[tag + 1] - inverted_offsets_[tag]};
}

std::size_t TaggingStore::tag_uses(TagId tag) const {
    std::size_t total = 0;
    for (const Posting& p : inverted_list(tag)) total += p.tf;
    return total;
}

std::uint32_t TaggingStore::tf(TagId tag, ItemId item) const {
    random_accesses_.fetch_add(1, std::memory_order_relaxed);
    for (const Posting& p : inverted_list(tag)) {
        if (p.item == item) return p.tf;
    }
    return 0;
}

}  // namespace socialtopk
