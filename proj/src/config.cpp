#include "mwrc/config.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>

namespace mwrc {

namespace {

// Minimal value model for the config dialect: scalars keep their literal
// text so numeric inputs round-trip exactly.
struct Value {
    enum class Kind { Scalar, String, Array, Table } kind = Kind::Scalar;
    std::string text;                          // Scalar literal or String contents
    std::vector<Value> items;                  // Array
    std::vector<std::pair<std::string, Value>> fields;  // Table
};

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    std::map<std::string, Value> parse_document() {
        std::map<std::string, Value> doc;
        skip_space(true);
        while (!at_end()) {
            const std::string key = parse_key();
            skip_space(false);
            expect('=');
            skip_space(false);
            Value v = parse_value();
            if (!doc.emplace(key, std::move(v)).second) {
                throw ConfigError("duplicate key '" + key + "'");
            }
            skip_space(false);
            if (!at_end() && text_[pos_] != '\n') {
                throw ConfigError("trailing characters after value for '" + key + "'");
            }
            skip_space(true);
        }
        return doc;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }

    void skip_space(bool newlines) {
        while (!at_end()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (!at_end() && text_[pos_] != '\n') ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        if (at_end() || text_[pos_] != c) {
            throw ConfigError(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    std::string parse_key() {
        std::string key;
        while (!at_end()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                key += c;
                ++pos_;
            } else {
                break;
            }
        }
        if (key.empty()) throw ConfigError("expected a key");
        return key;
    }

    Value parse_value() {
        if (at_end()) throw ConfigError("expected a value");
        const char c = text_[pos_];
        if (c == '[') return parse_array();
        if (c == '{') return parse_table();
        if (c == '"') return parse_string();
        return parse_scalar();
    }

    Value parse_array() {
        expect('[');
        Value v;
        v.kind = Value::Kind::Array;
        skip_space(true);
        if (!at_end() && text_[pos_] == ']') {
            ++pos_;
            return v;
        }
        while (true) {
            v.items.push_back(parse_value());
            skip_space(true);
            if (!at_end() && text_[pos_] == ',') {
                ++pos_;
                skip_space(true);
                continue;
            }
            expect(']');
            return v;
        }
    }

    Value parse_table() {
        expect('{');
        Value v;
        v.kind = Value::Kind::Table;
        skip_space(true);
        if (!at_end() && text_[pos_] == '}') {
            ++pos_;
            return v;
        }
        while (true) {
            const std::string key = parse_key();
            skip_space(false);
            expect('=');
            skip_space(false);
            v.fields.emplace_back(key, parse_value());
            skip_space(true);
            if (!at_end() && text_[pos_] == ',') {
                ++pos_;
                skip_space(true);
                continue;
            }
            expect('}');
            return v;
        }
    }

    Value parse_string() {
        expect('"');
        Value v;
        v.kind = Value::Kind::String;
        while (!at_end() && text_[pos_] != '"') {
            v.text += text_[pos_];
            ++pos_;
        }
        expect('"');
        return v;
    }

    Value parse_scalar() {
        Value v;
        while (!at_end()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
                c == '+' || c == '/') {
                v.text += c;
                ++pos_;
            } else {
                break;
            }
        }
        if (v.text.empty()) throw ConfigError("expected a value");
        return v;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

long long to_int(const Value& v, const std::string& key) {
    if (v.kind != Value::Kind::Scalar) throw ConfigError("'" + key + "' must be an integer");
    char* end = nullptr;
    const long long out = std::strtoll(v.text.c_str(), &end, 10);
    if (end == nullptr || *end != '\0') {
        throw ConfigError("'" + key + "' must be an integer, got '" + v.text + "'");
    }
    return out;
}

std::uint64_t to_u64(const Value& v, const std::string& key) {
    const long long i = to_int(v, key);
    if (i < 0) throw ConfigError("'" + key + "' must be non-negative");
    return static_cast<std::uint64_t>(i);
}

double to_double(const Value& v, const std::string& key) {
    if (v.kind != Value::Kind::Scalar) throw ConfigError("'" + key + "' must be a number");
    char* end = nullptr;
    const double out = std::strtod(v.text.c_str(), &end);
    if (end == nullptr || *end != '\0') {
        throw ConfigError("'" + key + "' must be a number, got '" + v.text + "'");
    }
    return out;
}

std::string to_literal(const Value& v, const std::string& key) {
    if (v.kind == Value::Kind::String || v.kind == Value::Kind::Scalar) {
        if (v.text.empty()) throw ConfigError("'" + key + "' is empty");
        return v.text;
    }
    throw ConfigError("'" + key + "' must be a number or string literal");
}

FieldSpecText parse_field_value(const Value& v) {
    if (v.kind != Value::Kind::Table) {
        throw ConfigError("'field' must be a table like { char = 2, deg = 1 }");
    }
    FieldSpecText out;
    bool have_char = false, have_deg = false;
    for (const auto& [key, val] : v.fields) {
        if (key == "char") {
            out.characteristic = static_cast<std::uint32_t>(to_int(val, "field.char"));
            have_char = true;
        } else if (key == "deg") {
            out.degree = static_cast<std::uint32_t>(to_int(val, "field.deg"));
            have_deg = true;
        } else if (key == "modulus") {
            if (val.kind != Value::Kind::Array) throw ConfigError("'field.modulus' must be an array");
            std::vector<std::uint32_t> m;
            for (const Value& item : val.items) {
                m.push_back(static_cast<std::uint32_t>(to_int(item, "field.modulus")));
            }
            out.modulus = std::move(m);
        } else {
            throw ConfigError("unknown field key '" + key + "'");
        }
    }
    if (!have_char || !have_deg) throw ConfigError("'field' needs both char and deg");
    return out;
}

NoiseSpec parse_noise_value(const Value& v) {
    if (v.kind != Value::Kind::Table) {
        throw ConfigError("each noise entry must be { rho = ... } or { pmf = [...] }");
    }
    NoiseSpec out;
    for (const auto& [key, val] : v.fields) {
        if (key == "rho") {
            out.rho = to_literal(val, "noise.rho");
        } else if (key == "pmf") {
            if (val.kind != Value::Kind::Array) throw ConfigError("'noise.pmf' must be an array");
            std::vector<double> p;
            for (const Value& item : val.items) p.push_back(to_double(item, "noise.pmf"));
            out.pmf = std::move(p);
        } else {
            throw ConfigError("unknown noise key '" + key + "'");
        }
    }
    if (out.rho.has_value() == out.pmf.has_value()) {
        throw ConfigError("noise entries need exactly one of rho or pmf");
    }
    return out;
}

std::vector<std::uint32_t> parse_gain_array(const Value& v, const std::string& key) {
    if (v.kind != Value::Kind::Array) throw ConfigError("'" + key + "' must be an array");
    std::vector<std::uint32_t> out;
    for (const Value& item : v.items) {
        out.push_back(static_cast<std::uint32_t>(to_int(item, key)));
    }
    return out;
}

ChannelSpec channel_from_doc(std::map<std::string, Value>& doc) {
    ChannelSpec out;
    auto take = [&](const char* key) -> Value* {
        auto it = doc.find(key);
        return it == doc.end() ? nullptr : &it->second;
    };
    Value* v = take("L");
    if (!v) throw ConfigError("missing key 'L'");
    out.users = static_cast<int>(to_int(*v, "L"));
    doc.erase("L");

    v = take("field");
    if (!v) throw ConfigError("missing key 'field'");
    out.field = parse_field_value(*v);
    doc.erase("field");

    v = take("uplink_gains");
    if (!v) throw ConfigError("missing key 'uplink_gains'");
    out.uplink_gains = parse_gain_array(*v, "uplink_gains");
    doc.erase("uplink_gains");

    v = take("downlink_gains");
    if (!v) throw ConfigError("missing key 'downlink_gains'");
    out.downlink_gains = parse_gain_array(*v, "downlink_gains");
    doc.erase("downlink_gains");

    v = take("noise");
    if (!v) throw ConfigError("missing key 'noise'");
    if (v->kind != Value::Kind::Array) throw ConfigError("'noise' must be an array");
    for (const Value& item : v->items) out.noise.push_back(parse_noise_value(item));
    doc.erase("noise");
    return out;
}

}  // namespace

ChannelSpec parse_channel(const std::string& text) {
    auto doc = Parser(text).parse_document();
    ChannelSpec out = channel_from_doc(doc);
    if (!doc.empty()) throw ConfigError("unknown key '" + doc.begin()->first + "'");
    return out;
}

ExperimentConfig parse_experiment(const std::string& text) {
    auto doc = Parser(text).parse_document();
    ExperimentConfig out;
    out.channel = channel_from_doc(doc);

    auto require = [&](const char* key) -> Value {
        auto it = doc.find(key);
        if (it == doc.end()) throw ConfigError(std::string("missing key '") + key + "'");
        Value v = std::move(it->second);
        doc.erase(it);
        return v;
    };
    auto optional = [&](const char* key) -> std::optional<Value> {
        auto it = doc.find(key);
        if (it == doc.end()) return std::nullopt;
        Value v = std::move(it->second);
        doc.erase(it);
        return v;
    };

    {
        const Value v = require("scheme");
        if (v.kind != Value::Kind::String) throw ConfigError("'scheme' must be a string");
        out.scheme = v.text;
        if (out.scheme != "fdf" && out.scheme != "cdf") {
            throw ConfigError("scheme must be \"fdf\" or \"cdf\"");
        }
    }
    {
        const Value v = require("rates");
        if (v.kind != Value::Kind::Array) throw ConfigError("'rates' must be an array");
        for (const Value& item : v.items) out.rate_literals.push_back(to_literal(item, "rates"));
    }
    {
        const Value v = require("n_list");
        if (v.kind != Value::Kind::Array) throw ConfigError("'n_list' must be an array");
        for (const Value& item : v.items) out.n_list.push_back(to_int(item, "n_list"));
    }
    out.trials = to_int(require("trials"), "trials");
    out.seed = to_u64(require("seed"), "seed");
    if (auto v = optional("output")) {
        if (v->kind != Value::Kind::String) throw ConfigError("'output' must be a string");
        out.output = v->text;
    }
    if (auto v = optional("segments")) out.segments = static_cast<int>(to_int(*v, "segments"));
    if (auto v = optional("budget")) out.budget = to_u64(*v, "budget");
    if (auto v = optional("threads")) out.threads = static_cast<int>(to_int(*v, "threads"));

    if (!doc.empty()) throw ConfigError("unknown key '" + doc.begin()->first + "'");
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_noise(std::ostringstream& os, const NoiseSpec& n) {
    if (n.rho) {
        os << "{ rho = " << *n.rho << " }";
    } else {
        os << "{ pmf = [";
        for (std::size_t i = 0; i < n.pmf->size(); ++i) {
            if (i) os << ", ";
            os << format_double((*n.pmf)[i]);
        }
        os << "] }";
    }
}

}  // namespace

std::string serialize(const ExperimentConfig& config) {
    std::ostringstream os;
    os << "L = " << config.channel.users << "\n";
    os << "field = { char = " << config.channel.field.characteristic
       << ", deg = " << config.channel.field.degree;
    if (config.channel.field.modulus) {
        os << ", modulus = [";
        for (std::size_t i = 0; i < config.channel.field.modulus->size(); ++i) {
            if (i) os << ", ";
            os << (*config.channel.field.modulus)[i];
        }
        os << "]";
    }
    os << " }\n";
    os << "uplink_gains = [";
    for (std::size_t i = 0; i < config.channel.uplink_gains.size(); ++i) {
        if (i) os << ", ";
        os << config.channel.uplink_gains[i];
    }
    os << "]\n";
    os << "downlink_gains = [";
    for (std::size_t i = 0; i < config.channel.downlink_gains.size(); ++i) {
        if (i) os << ", ";
        os << config.channel.downlink_gains[i];
    }
    os << "]\n";
    os << "noise = [";
    for (std::size_t i = 0; i < config.channel.noise.size(); ++i) {
        if (i) os << ", ";
        write_noise(os, config.channel.noise[i]);
    }
    os << "]\n";
    os << "scheme = \"" << config.scheme << "\"\n";
    os << "rates = [";
    for (std::size_t i = 0; i < config.rate_literals.size(); ++i) {
        if (i) os << ", ";
        os << "\"" << config.rate_literals[i] << "\"";
    }
    os << "]\n";
    os << "n_list = [";
    for (std::size_t i = 0; i < config.n_list.size(); ++i) {
        if (i) os << ", ";
        os << config.n_list[i];
    }
    os << "]\n";
    os << "trials = " << config.trials << "\n";
    os << "seed = " << config.seed << "\n";
    if (!config.output.empty()) os << "output = \"" << config.output << "\"\n";
    if (config.segments != 0) os << "segments = " << config.segments << "\n";
    if (config.budget != kDefaultDecodeBudget) os << "budget = " << config.budget << "\n";
    if (config.threads != 1) os << "threads = " << config.threads << "\n";
    return os.str();
}

MwrcConfig build_channel(const ChannelSpec& spec) {
    if (spec.users < 2) throw ConfigError("L must be at least 2");
    Field field = Field::make(spec.field.characteristic, spec.field.degree, spec.field.modulus);

    if (spec.uplink_gains.size() != std::size_t(spec.users) ||
        spec.downlink_gains.size() != std::size_t(spec.users)) {
        throw ConfigError("need one uplink and one downlink gain per user");
    }
    if (spec.noise.size() != std::size_t(spec.users) + 1) {
        throw ConfigError("need one noise entry per node 0..L");
    }

    MwrcConfig out{std::move(field), {}, {}, {}};
    for (std::uint32_t g : spec.uplink_gains) {
        out.uplink_gains.push_back(static_cast<Field::Elem>(g));
    }
    for (std::uint32_t g : spec.downlink_gains) {
        out.downlink_gains.push_back(static_cast<Field::Elem>(g));
    }
    for (const NoiseSpec& n : spec.noise) {
        if (n.rho) {
            if (out.field.order() != 2) {
                throw ConfigError("rho noise shorthand needs the binary field");
            }
            char* end = nullptr;
            const double rho = std::strtod(n.rho->c_str(), &end);
            if (end == nullptr || *end != '\0') {
                throw ConfigError("bad rho literal '" + *n.rho + "'");
            }
            out.noise.push_back(NoisePmf::from_crossover(rho));
        } else {
            out.noise.push_back(NoisePmf(*n.pmf));
        }
    }
    out.validate();
    return out;
}

RateAllocation build_rates(const std::vector<std::string>& literals) {
    RateAllocation out;
    for (const std::string& text : literals) out.rates.push_back(Rational::parse(text));
    out.validate();
    return out;
}

}  // namespace mwrc
