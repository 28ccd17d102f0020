#pragma once

#include "lexichron/text.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lexichron {

struct WordForm {
    std::string raw;
    std::u32string normalized; // always normalize_form(raw)
    std::optional<std::string> cognate_class;

    static WordForm from_raw(std::string raw,
                             std::optional<std::string> cognate_class = {});
};

enum class LanguageRole { Modern, Proto };

struct LanguageRecord {
    std::string label;
    LanguageRole role = LanguageRole::Modern;
    std::set<std::string> tags;

    bool has_tag(const std::string& tag) const { return tags.count(tag) > 0; }
};

struct ItemRecord {
    std::string item_id;
    std::string gloss;
};

// Languages x items table of word-form sets. A slot may hold several
// synonyms; an empty slot means the form is unattested, never "". Built
// once by the parser or the simulator, then treated as immutable.
class LexicalDatabase {
  public:
    const std::string& family_name() const { return family_name_; }
    void set_family_name(std::string name) { family_name_ = std::move(name); }

    std::size_t language_count() const { return languages_.size(); }
    std::size_t item_count() const { return items_.size(); }

    const LanguageRecord& language(std::size_t index) const { return languages_[index]; }
    LanguageRecord& language(std::size_t index) { return languages_[index]; }
    const ItemRecord& item(std::size_t index) const { return items_[index]; }

    const std::vector<LanguageRecord>& languages() const { return languages_; }
    const std::vector<ItemRecord>& items() const { return items_; }

    std::optional<std::size_t> find_language(const std::string& label) const;
    std::optional<std::size_t> find_item(const std::string& item_id) const;

    // Label must be unique; returns the new index.
    std::size_t add_language(LanguageRecord record);
    // item_id must be unique and non-empty; returns the new index.
    std::size_t add_item(ItemRecord record);

    // Accumulates a synonym. Returns false when an identical normalized
    // form is already present in the slot (the form is dropped).
    bool add_form(std::size_t language, std::size_t item, WordForm form);

    // Empty vector = missing slot.
    const std::vector<WordForm>& slot(std::size_t language, std::size_t item) const;
    bool has_slot(std::size_t language, std::size_t item) const {
        return !slot(language, item).empty();
    }

    // Index of the unique proto-role language, if any. More than one
    // proto raises ErrKind::ConfigError.
    std::optional<std::size_t> proto_language() const;
    std::vector<std::size_t> modern_languages() const;

  private:
    std::string family_name_;
    std::vector<LanguageRecord> languages_;
    std::vector<ItemRecord> items_;
    std::vector<std::vector<std::vector<WordForm>>> slots_; // [language][item]
};

enum class WordlistFormat { TsvLongV1 };

// Long-row TSV ("tsv-long-v1"): header
//   language<TAB>item_id<TAB>gloss<TAB>form[<TAB>cognate_class]
// one row per word form, '#' lines are comments. Duplicate identical
// (language, item, normalized form) rows dedup with a warning.
LexicalDatabase parse_database(std::istream& source,
                               WordlistFormat format = WordlistFormat::TsvLongV1,
                               std::vector<std::string>* warnings = nullptr);

// Sidecar key=value metadata: family_name=..., language.<label>.role=...,
// language.<label>.tags=a,b. Unknown keys or labels are errors.
void apply_metadata(LexicalDatabase& db, std::istream& meta);

void serialize_database(const LexicalDatabase& db, std::ostream& out);
void serialize_metadata(const LexicalDatabase& db, std::ostream& out);

// Loads <path> plus the "<path>.meta" sidecar when present (or the
// explicit `meta_path`). The family name defaults to the file stem.
LexicalDatabase load_database(const std::string& path,
                              const std::optional<std::string>& meta_path = {},
                              std::vector<std::string>* warnings = nullptr);

// item_ids present in both databases, in a's item order.
std::vector<std::string> common_items(const LexicalDatabase& a,
                                      const LexicalDatabase& b);

using LanguageFilter = std::function<bool(const LanguageRecord&)>;

LanguageFilter all_languages();
LanguageFilter modern_only();
LanguageFilter with_tag(std::string tag);

// Restriction to matching languages (and, when given, to the listed
// items), preserving order and slots. Zero matching languages raises
// ErrKind::EmptySelection; an unknown item_id raises ErrKind::ConfigError.
LexicalDatabase subset(const LexicalDatabase& db, const LanguageFilter& keep,
                       const std::optional<std::set<std::string>>& item_ids = {});

} // namespace lexichron
