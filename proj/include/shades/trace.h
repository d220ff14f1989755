#pragma once

// Trace alphabet: the letters of paths through a type's tree.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "shades/core.h"

namespace shades {

class TraceSymbol {
 public:
  enum class Kind : std::uint8_t { Data, Cont, Choice, End };

  static TraceSymbol data(Polarity p);
  static TraceSymbol cont(Polarity p);
  static TraceSymbol choice(View v, std::vector<std::string> labels, std::string chosen);
  static TraceSymbol end_mark();

  Kind kind() const { return kind_; }
  Polarity polarity() const { return polarity_; }
  View view() const { return view_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& chosen() const { return chosen_; }

  // `?d`, `!c`, `end`, `&[a,b]:a`
  const std::string& spelling() const { return text_; }
  // `&a` in place of `&[a,b]:a`
  std::string abbrev() const;
  TraceSymbol flipped() const;

  bool operator==(const TraceSymbol& o) const { return text_ == o.text_; }
  auto operator<=>(const TraceSymbol& o) const { return text_ <=> o.text_; }

 private:
  TraceSymbol() = default;
  void spell();

  Kind kind_ = Kind::End;
  Polarity polarity_ = Polarity::In;
  View view_ = View::External;
  std::vector<std::string> labels_;
  std::string chosen_;
  std::string text_;
};

// Throws MalformedSymbol.
TraceSymbol parse_symbol(std::string_view text);

using Word = std::vector<TraceSymbol>;
using WordSet = std::set<Word>;

std::string spell_word(const Word& w, bool abbrev = false);
// One word per line, `<eps>` for the empty word.
std::string dump_words(const WordSet& ws, bool abbrev = false);
Word parse_word(std::string_view text);

}  // namespace shades
