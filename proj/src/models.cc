/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "agreesim/models.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "agreesim/errors.h"

namespace agreesim {

ModelSpec ModelSpec::Flip(double keep_probability, ModelSpec base) {
  if (!(keep_probability >= 0.0 && keep_probability <= 1.0)) {
    throw ValidationError("flip probability must lie in [0, 1]");
  }
  ModelSpec spec(Kind::kFlip);
  spec.keep_probability_ = keep_probability;
  spec.base_ = std::make_shared<const ModelSpec>(std::move(base));
  return spec;
}

ModelSpec ModelSpec::Conflate(ModelSpec base) {
  ModelSpec spec(Kind::kConflate);
  spec.base_ = std::make_shared<const ModelSpec>(std::move(base));
  return spec;
}

bool ModelSpec::RequiresMatrix() const {
  if (kind_ == Kind::kConflate) return true;
  return base_ != nullptr && base_->RequiresMatrix();
}

int ModelSpec::Depth() const {
  return base_ == nullptr ? 1 : 1 + base_->Depth();
}

std::string ModelSpec::ToString() const {
  switch (kind_) {
    case Kind::kAverage:
      return "average";
    case Kind::kMax:
      return "max";
    case Kind::kSample:
      return "sample";
    case Kind::kCanonicalTruth:
      return "truth";
    case Kind::kFlip: {
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), keep_probability_);
      return "flip(" + std::string(buf, end) + "," + base_->ToString() + ")";
    }
    case Kind::kConflate:
      return "conflate(" + base_->ToString() + ")";
  }
  return {};
}

bool ModelSpec::operator==(const ModelSpec& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::kFlip && keep_probability_ != other.keep_probability_) {
    return false;
  }
  if ((base_ == nullptr) != (other.base_ == nullptr)) return false;
  return base_ == nullptr || *base_ == *other.base_;
}

namespace {

struct Token {
  enum Type { kIdent, kNumber, kLParen, kRParen, kComma, kEnd } type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                 text[i] == '_')) {
        ++i;
      }
      std::string ident(text.substr(start, i - start));
      std::transform(ident.begin(), ident.end(), ident.begin(),
                     [](unsigned char ch) { return std::tolower(ch); });
      tokens.push_back({Token::kIdent, std::move(ident), start});
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
               c == '-' || c == '+') {
      const std::size_t start = i;
      ++i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) ||
              text[i] == '.' ||
              ((text[i] == '-' || text[i] == '+') &&
               (text[i - 1] == 'e' || text[i - 1] == 'E')))) {
        ++i;
      }
      tokens.push_back(
          {Token::kNumber, std::string(text.substr(start, i - start)), start});
    } else if (c == '(') {
      tokens.push_back({Token::kLParen, "(", i++});
    } else if (c == ')') {
      tokens.push_back({Token::kRParen, ")", i++});
    } else if (c == ',') {
      tokens.push_back({Token::kComma, ",", i++});
    } else {
      throw ParseError("model spec: unexpected character '" +
                       std::string(1, c) + "' at position " +
                       std::to_string(i));
    }
  }
  tokens.push_back({Token::kEnd, "", text.size()});
  return tokens;
}

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : tokens_(Tokenize(text)) {}

  ModelSpec Parse() {
    ModelSpec spec = ParseSpec(1);
    if (Peek().type != Token::kEnd) Fail(Peek(), "trailing input");
    return spec;
  }

 private:
  const Token& Peek() const { return tokens_[next_]; }
  const Token& Take() { return tokens_[next_++]; }

  [[noreturn]] void Fail(const Token& token, const std::string& what) const {
    const std::string shown =
        token.type == Token::kEnd ? "end of input" : "'" + token.text + "'";
    throw ParseError("model spec: " + what + " at " + shown + " (position " +
                     std::to_string(token.pos) + ")");
  }

  void Expect(Token::Type type, const char* what) {
    if (Peek().type != type) Fail(Peek(), std::string("expected ") + what);
    Take();
  }

  ModelSpec ParseSpec(int depth) {
    const Token& head = Take();
    if (head.type != Token::kIdent) Fail(head, "expected a model name");
    if (depth > kMaxModelDepth) Fail(head, "nesting too deep");
    if (head.text == "average" || head.text == "avg" || head.text == "mean") {
      return ModelSpec::Average();
    }
    if (head.text == "max") return ModelSpec::Max();
    if (head.text == "sample") return ModelSpec::Sample();
    if (head.text == "truth" || head.text == "canonical") {
      return ModelSpec::CanonicalTruth();
    }
    if (head.text == "flip") {
      Expect(Token::kLParen, "'('");
      const Token& number = Take();
      if (number.type != Token::kNumber) Fail(number, "expected a probability");
      double p = 0.0;
      const char* first = number.text.data();
      const char* last = first + number.text.size();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, p);
      if (ec != std::errc() || ptr != last) Fail(number, "invalid number");
      if (!(p >= 0.0 && p <= 1.0)) Fail(number, "probability outside [0, 1]");
      Expect(Token::kComma, "','");
      ModelSpec base = ParseSpec(depth + 1);
      Expect(Token::kRParen, "')'");
      return ModelSpec::Flip(p, std::move(base));
    }
    if (head.text == "conflate") {
      Expect(Token::kLParen, "'('");
      ModelSpec base = ParseSpec(depth + 1);
      Expect(Token::kRParen, "')'");
      return ModelSpec::Conflate(std::move(base));
    }
    Fail(head, "unknown model");
  }

  std::vector<Token> tokens_;
  std::size_t next_ = 0;
};

// Whether every value `spec` produces is a scheme label.
bool ProducesLabels(const ModelSpec& spec) {
  return spec.kind() != ModelSpec::Kind::kAverage;
}

double Evaluate(const ModelSpec& spec, const Document& doc,
                const LabelScheme& scheme, const ModelOptions& options,
                Rng& rng) {
  switch (spec.kind()) {
    case ModelSpec::Kind::kAverage:
      return AverageLabel(doc);
    case ModelSpec::Kind::kMax:
      return MaxLabel(doc);
    case ModelSpec::Kind::kSample:
      return SampleLabel(doc, rng);
    case ModelSpec::Kind::kCanonicalTruth:
      return Binarize(AverageLabel(doc), scheme)
                 ? scheme.PositiveRepresentative()
                 : scheme.NegativeRepresentative();
    case ModelSpec::Kind::kFlip: {
      const double base = Evaluate(spec.base(), doc, scheme, options, rng);
      if (options.flip_space == FlipSpace::kOrdinal) {
        return FlipLabel(static_cast<int>(base), spec.keep_probability(),
                         scheme, rng);
      }
      const bool positive = Binarize(base, scheme);
      const bool keep = rng.Bernoulli(spec.keep_probability());
      return positive == keep ? scheme.PositiveRepresentative()
                              : scheme.NegativeRepresentative();
    }
    case ModelSpec::Kind::kConflate: {
      const double base = Evaluate(spec.base(), doc, scheme, options, rng);
      return options.matrix->SampleConflated(static_cast<int>(base), rng);
    }
  }
  return 0.0;
}

}  // namespace

ModelSpec ParseModelSpec(std::string_view text) {
  return SpecParser(text).Parse();
}

void ValidateModel(const ModelSpec& spec, const LabelScheme& scheme,
                   const ModelOptions& options) {
  if (spec.Depth() > kMaxModelDepth) {
    throw ConfigError("model nesting deeper than " +
                      std::to_string(kMaxModelDepth));
  }
  if (spec.RequiresMatrix()) {
    if (options.matrix == nullptr) {
      throw ConfigError("model " + spec.ToString() +
                        " needs a conflation matrix");
    }
    if (!(options.matrix->scheme() == scheme)) {
      throw ConfigError("conflation matrix scheme does not match the dataset");
    }
  }
  if (!spec.IsComposite()) return;
  const bool needs_label_base =
      spec.kind() == ModelSpec::Kind::kConflate ||
      options.flip_space == FlipSpace::kOrdinal;
  if (needs_label_base && !ProducesLabels(spec.base())) {
    throw ConfigError("model " + spec.ToString() +
                      " needs a base that produces scheme labels, not " +
                      spec.base().ToString());
  }
  ValidateModel(spec.base(), scheme, options);
}

Assignment ApplyModel(const ModelSpec& spec, const Dataset& dataset,
                      const ModelOptions& options, Rng& rng) {
  ValidateModel(spec, dataset.scheme(), options);
  Assignment out;
  out.integral_only = ProducesLabels(spec);
  out.values.reserve(dataset.size());
  for (const Document& doc : dataset.documents()) {
    out.values.push_back(Evaluate(spec, doc, dataset.scheme(), options, rng));
  }
  return out;
}

double AverageLabel(const Document& doc) {
  double sum = 0.0;
  for (int v : doc.labels) sum += v;
  return sum / static_cast<double>(doc.labels.size());
}

int MaxLabel(const Document& doc) {
  return *std::max_element(doc.labels.begin(), doc.labels.end());
}

int SampleLabel(const Document& doc, Rng& rng) {
  return doc.labels[rng.UniformIndex(doc.labels.size())];
}

int FlipLabel(int value, double keep_probability, const LabelScheme& scheme,
              Rng& rng) {
  const auto index = scheme.IndexOf(value);
  if (!index) {
    throw ValidationError("label " + std::to_string(value) +
                          " is not in the scheme");
  }
  if (rng.Bernoulli(keep_probability)) return value;
  // Uniform over the K-1 other positions.
  std::size_t other = rng.UniformIndex(scheme.size() - 1);
  if (other >= *index) ++other;
  return scheme.ValueAt(other);
}

Assignment CanonicalTruth(const Dataset& dataset) {
  Rng unused(0);
  return ApplyModel(ModelSpec::CanonicalTruth(), dataset, {}, unused);
}

}  // namespace agreesim
