#include "mlcc/chains.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mlcc/errors.hpp"
#include "mlcc/rng.hpp"

namespace mlcc {

namespace {

constexpr int kModelFormatVersion = 1;

void check_order(const ChainOrder& order, std::size_t q) {
    if (order.order.size() != q)
        throw std::invalid_argument("chain order length " + std::to_string(order.order.size()) +
                                    " does not match label count " + std::to_string(q));
    std::vector<char> seen(q, 0);
    for (int v : order.order) {
        if (v < 0 || static_cast<std::size_t>(v) >= q || seen[v])
            throw std::invalid_argument("chain order is not a permutation of the labels");
        seen[v] = 1;
    }
}

void check_width(std::size_t got, std::size_t want) {
    if (got != want)
        throw std::invalid_argument("input width " + std::to_string(got) +
                                    " does not match feature width " + std::to_string(want));
}

}  // namespace

TrainedChain train_cc(const Dataset& d, const ChainOrder& order, const LearnerConfig& cfg) {
    const std::size_t n = d.n_instances(), k = d.n_features(), q = d.n_labels();
    check_order(order, q);

    TrainedChain chain;
    chain.order = order;
    chain.label_names = d.label_names;
    chain.feature_width = k;
    chain.models.reserve(q);

    std::vector<std::uint8_t> targets(n);
    for (std::size_t c = 0; c < q; ++c) {
        // original features plus the ground truth of the c preceding labels
        Matrix augmented(n, k + c);
        for (std::size_t i = 0; i < n; ++i) {
            auto src = d.features.row(i);
            auto dst = augmented.row(i);
            std::copy(src.begin(), src.end(), dst.begin());
            for (std::size_t p = 0; p < c; ++p)
                dst[k + p] = d.labels.at(i, static_cast<std::size_t>(order.order[p]));
        }
        for (std::size_t i = 0; i < n; ++i)
            targets[i] = d.labels.at(i, static_cast<std::size_t>(order.order[c]));
        chain.models.push_back(train_binary(augmented, targets, cfg));
    }
    return chain;
}

std::vector<std::uint8_t> predict_cc(const TrainedChain& chain, std::span<const double> x) {
    check_width(x.size(), chain.feature_width);
    const std::size_t q = chain.models.size();
    std::vector<double> augmented(x.begin(), x.end());
    augmented.reserve(chain.feature_width + q);
    std::vector<std::uint8_t> out(q, 0);
    for (std::size_t c = 0; c < q; ++c) {
        int bit = predict_label(chain.models[c], augmented);
        out[static_cast<std::size_t>(chain.order.order[c])] = static_cast<std::uint8_t>(bit);
        augmented.push_back(static_cast<double>(bit));
    }
    return out;
}

LabelMatrix predict_cc(const TrainedChain& chain, const Matrix& inputs) {
    LabelMatrix out(inputs.rows, chain.models.size());
    for (std::size_t i = 0; i < inputs.rows; ++i) {
        auto row = predict_cc(chain, inputs.row(i));
        std::copy(row.begin(), row.end(), out.row(i).begin());
    }
    return out;
}

TrainedBR train_br(const Dataset& d, const LearnerConfig& cfg) {
    const std::size_t n = d.n_instances(), q = d.n_labels();
    TrainedBR br;
    br.label_names = d.label_names;
    br.feature_width = d.n_features();
    br.models.reserve(q);
    std::vector<std::uint8_t> targets(n);
    for (std::size_t l = 0; l < q; ++l) {
        for (std::size_t i = 0; i < n; ++i) targets[i] = d.labels.at(i, l);
        br.models.push_back(train_binary(d.features, targets, cfg));
    }
    return br;
}

std::vector<std::uint8_t> predict_br(const TrainedBR& br, std::span<const double> x) {
    check_width(x.size(), br.feature_width);
    std::vector<std::uint8_t> out(br.models.size(), 0);
    for (std::size_t l = 0; l < br.models.size(); ++l)
        out[l] = static_cast<std::uint8_t>(predict_label(br.models[l], x));
    return out;
}

LabelMatrix predict_br(const TrainedBR& br, const Matrix& inputs) {
    LabelMatrix out(inputs.rows, br.models.size());
    for (std::size_t i = 0; i < inputs.rows; ++i) {
        auto row = predict_br(br, inputs.row(i));
        std::copy(row.begin(), row.end(), out.row(i).begin());
    }
    return out;
}

TrainedECC train_ecc(const Dataset& d, int n_members, const LearnerConfig& cfg,
                     std::uint64_t seed, bool bootstrap) {
    if (n_members < 1) throw ConfigError("ensemble needs at least one member");
    const std::size_t n = d.n_instances();
    const int q = static_cast<int>(d.n_labels());

    TrainedECC ecc;
    ecc.members.reserve(static_cast<std::size_t>(n_members));
    for (int e = 0; e < n_members; ++e) {
        std::uint64_t member_seed = derive_seed(seed, "ecc/member/" + std::to_string(e));
        ecc.member_seeds.push_back(member_seed);
        ChainOrder order = random_order(q, member_seed);
        if (bootstrap) {
            SplitMix64 rng(derive_seed(seed, "ecc/bootstrap/" + std::to_string(e)));
            std::vector<std::size_t> rows(n);
            for (std::size_t i = 0; i < n; ++i)
                rows[i] = static_cast<std::size_t>(rng.next_below(n));
            ecc.members.push_back(train_cc(select_rows(d, rows), order, cfg));
        } else {
            ecc.members.push_back(train_cc(d, order, cfg));
        }
    }
    return ecc;
}

std::vector<std::uint8_t> predict_ecc(const TrainedECC& ecc, std::span<const double> x) {
    if (ecc.members.empty()) throw std::invalid_argument("empty ensemble");
    const std::size_t q = ecc.members.front().models.size();
    std::vector<int> votes(q, 0);
    for (const TrainedChain& member : ecc.members) {
        auto row = predict_cc(member, x);
        for (std::size_t l = 0; l < q; ++l) votes[l] += row[l];
    }
    std::vector<std::uint8_t> out(q, 0);
    const double members = static_cast<double>(ecc.members.size());
    for (std::size_t l = 0; l < q; ++l)
        out[l] = static_cast<double>(votes[l]) / members >= ecc.vote_threshold ? 1 : 0;
    return out;
}

LabelMatrix predict_ecc(const TrainedECC& ecc, const Matrix& inputs) {
    LabelMatrix out(inputs.rows, ecc.members.front().models.size());
    for (std::size_t i = 0; i < inputs.rows; ++i) {
        auto row = predict_ecc(ecc, inputs.row(i));
        std::copy(row.begin(), row.end(), out.row(i).begin());
    }
    return out;
}

LabelMatrix predict_any(const AnyModel& model, const Matrix& inputs) {
    return std::visit(
        [&](const auto& m) -> LabelMatrix {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TrainedBR>) return predict_br(m, inputs);
            else if constexpr (std::is_same_v<T, TrainedChain>) return predict_cc(m, inputs);
            else return predict_ecc(m, inputs);
        },
        model);
}

const std::vector<std::string>& model_label_names(const AnyModel& model) {
    if (const auto* br = std::get_if<TrainedBR>(&model)) return br->label_names;
    if (const auto* cc = std::get_if<TrainedChain>(&model)) return cc->label_names;
    return std::get<TrainedECC>(model).members.front().label_names;
}

std::size_t model_feature_width(const AnyModel& model) {
    if (const auto* br = std::get_if<TrainedBR>(&model)) return br->feature_width;
    if (const auto* cc = std::get_if<TrainedChain>(&model)) return cc->feature_width;
    return std::get<TrainedECC>(model).members.front().feature_width;
}

namespace {

nlohmann::json order_to_json(const ChainOrder& order) {
    nlohmann::json j;
    j["method"] = order_method_name(order.method);
    j["n"] = order.ngram_n;
    j["seed"] = order.seed;
    j["order"] = order.order;
    if (order.head) {
        j["head"] = {{"first", order.head->first},
                     {"second", order.head->second},
                     {"index_order_default", order.head->index_order_default}};
    }
    return j;
}

ChainOrder order_from_json(const nlohmann::json& j) {
    ChainOrder order;
    std::string method = j.at("method").get<std::string>();
    if (method == "gocc") order.method = OrderMethod::gocc;
    else if (method == "tocc") order.method = OrderMethod::tocc;
    else if (method == "ngram") order.method = OrderMethod::ngram;
    else if (method == "random") order.method = OrderMethod::random;
    else if (method == "given") order.method = OrderMethod::given;
    else throw DataError("unknown order method in model file: " + method);
    j.at("n").get_to(order.ngram_n);
    j.at("seed").get_to(order.seed);
    j.at("order").get_to(order.order);
    if (j.contains("head")) {
        HeadPair head;
        j["head"].at("first").get_to(head.first);
        j["head"].at("second").get_to(head.second);
        j["head"].at("index_order_default").get_to(head.index_order_default);
        order.head = head;
    }
    return order;
}

nlohmann::json chain_to_json(const TrainedChain& chain) {
    nlohmann::json models = nlohmann::json::array();
    for (const BinaryModel& m : chain.models) models.push_back(binary_model_to_json(m));
    return nlohmann::json{{"order", order_to_json(chain.order)},
                          {"label_names", chain.label_names},
                          {"feature_width", chain.feature_width},
                          {"models", std::move(models)}};
}

TrainedChain chain_from_json(const nlohmann::json& j) {
    TrainedChain chain;
    chain.order = order_from_json(j.at("order"));
    j.at("label_names").get_to(chain.label_names);
    j.at("feature_width").get_to(chain.feature_width);
    for (const auto& m : j.at("models")) chain.models.push_back(binary_model_from_json(m));
    if (chain.models.size() != chain.label_names.size())
        throw DataError("chain model count does not match label count");
    return chain;
}

}  // namespace

nlohmann::json model_to_json(const AnyModel& model) {
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    if (const auto* br = std::get_if<TrainedBR>(&model)) {
        j["type"] = "br";
        j["label_names"] = br->label_names;
        j["feature_width"] = br->feature_width;
        nlohmann::json models = nlohmann::json::array();
        for (const BinaryModel& m : br->models) models.push_back(binary_model_to_json(m));
        j["models"] = std::move(models);
    } else if (const auto* cc = std::get_if<TrainedChain>(&model)) {
        j["type"] = "cc";
        j.update(chain_to_json(*cc));
    } else {
        const auto& ecc = std::get<TrainedECC>(model);
        j["type"] = "ecc";
        j["vote_threshold"] = ecc.vote_threshold;
        j["member_seeds"] = ecc.member_seeds;
        nlohmann::json members = nlohmann::json::array();
        for (const TrainedChain& m : ecc.members) members.push_back(chain_to_json(m));
        j["members"] = std::move(members);
    }
    return j;
}

AnyModel model_from_json(const nlohmann::json& j) {
    int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
        throw DataError("unsupported model format_version " + std::to_string(version));
    std::string type = j.at("type").get<std::string>();
    if (type == "br") {
        TrainedBR br;
        j.at("label_names").get_to(br.label_names);
        j.at("feature_width").get_to(br.feature_width);
        for (const auto& m : j.at("models")) br.models.push_back(binary_model_from_json(m));
        return br;
    }
    if (type == "cc") return chain_from_json(j);
    if (type == "ecc") {
        TrainedECC ecc;
        j.at("vote_threshold").get_to(ecc.vote_threshold);
        j.at("member_seeds").get_to(ecc.member_seeds);
        for (const auto& m : j.at("members")) ecc.members.push_back(chain_from_json(m));
        if (ecc.members.empty()) throw DataError("ensemble model file has no members");
        return ecc;
    }
    throw DataError("unknown model type: " + type);
}

void save_model(const AnyModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

AnyModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path + ": invalid JSON: " + e.what());
    }
    return model_from_json(j);
}

}  // namespace mlcc
