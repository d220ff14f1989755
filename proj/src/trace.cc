#include "shades/trace.h"

#include <algorithm>
#include <sstream>

namespace shades {

namespace {

char polarity_char(Polarity p) { return p == Polarity::In ? '?' : '!'; }
char view_char(View v) { return v == View::External ? '&' : '+'; }

bool is_label(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

}  // namespace

TraceSymbol TraceSymbol::data(Polarity p) {
  TraceSymbol s;
  s.kind_ = Kind::Data;
  s.polarity_ = p;
  s.spell();
  return s;
}

TraceSymbol TraceSymbol::cont(Polarity p) {
  TraceSymbol s;
  s.kind_ = Kind::Cont;
  s.polarity_ = p;
  s.spell();
  return s;
}

TraceSymbol TraceSymbol::choice(View v, std::vector<std::string> labels, std::string chosen) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (!std::binary_search(labels.begin(), labels.end(), chosen))
    throw Error(ErrorKind::MalformedSymbol, "label " + chosen + " not in its label set");
  TraceSymbol s;
  s.kind_ = Kind::Choice;
  s.view_ = v;
  s.labels_ = std::move(labels);
  s.chosen_ = std::move(chosen);
  s.spell();
  return s;
}

TraceSymbol TraceSymbol::end_mark() {
  TraceSymbol s;
  s.spell();
  return s;
}

void TraceSymbol::spell() {
  switch (kind_) {
    case Kind::Data: text_ = {polarity_char(polarity_), 'd'}; break;
    case Kind::Cont: text_ = {polarity_char(polarity_), 'c'}; break;
    case Kind::End: text_ = "end"; break;
    case Kind::Choice:
      text_ = std::string(1, view_char(view_)) + "[";
      for (std::size_t i = 0; i < labels_.size(); ++i) text_ += (i ? "," : "") + labels_[i];
      text_ += "]:" + chosen_;
      break;
  }
}

std::string TraceSymbol::abbrev() const {
  if (kind_ != Kind::Choice) return text_;
  return std::string(1, view_char(view_)) + chosen_;
}

TraceSymbol TraceSymbol::flipped() const {
  switch (kind_) {
    case Kind::Data: return data(dual(polarity_));
    case Kind::Cont: return cont(dual(polarity_));
    case Kind::Choice: return choice(dual(view_), labels_, chosen_);
    case Kind::End: return *this;
  }
  return *this;
}

TraceSymbol parse_symbol(std::string_view text) {
  auto bad = [&] { return Error(ErrorKind::MalformedSymbol, std::string(text)); };
  if (text == "end") return TraceSymbol::end_mark();
  if (text.size() == 2 && (text[0] == '?' || text[0] == '!')) {
    Polarity p = text[0] == '?' ? Polarity::In : Polarity::Out;
    if (text[1] == 'd') return TraceSymbol::data(p);
    if (text[1] == 'c') return TraceSymbol::cont(p);
    throw bad();
  }
  if (text.size() > 4 && (text[0] == '&' || text[0] == '+') && text[1] == '[') {
    auto close = text.find("]:");
    if (close == std::string_view::npos) throw bad();
    std::string chosen(text.substr(close + 2));
    std::vector<std::string> labels;
    std::string_view body = text.substr(2, close - 2);
    std::size_t pos = 0;
    while (true) {
      auto comma = body.find(',', pos);
      auto label = body.substr(pos, comma == std::string_view::npos ? body.npos : comma - pos);
      if (!is_label(label)) throw bad();
      labels.emplace_back(label);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (!is_label(chosen)) throw bad();
    if (!std::is_sorted(labels.begin(), labels.end()) ||
        std::adjacent_find(labels.begin(), labels.end()) != labels.end())
      throw bad();
    return TraceSymbol::choice(text[0] == '&' ? View::External : View::Internal,
                               std::move(labels), std::move(chosen));
  }
  throw bad();
}

std::string spell_word(const Word& w, bool abbrev) {
  if (w.empty()) return "<eps>";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += abbrev ? w[i].abbrev() : w[i].spelling();
  }
  return out;
}

std::string dump_words(const WordSet& ws, bool abbrev) {
  std::string out;
  for (const auto& w : ws) out += spell_word(w, abbrev) + "\n";
  return out;
}

Word parse_word(std::string_view text) {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "<eps>") continue;
    w.push_back(parse_symbol(tok));
  }
  return w;
}

}  // namespace shades
