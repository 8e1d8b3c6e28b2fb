#include "evomsn/serialize.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

#include "evomsn/common.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace evomsn {

namespace {

using nlohmann::json;

MlpParams shell_mlp(int in, int hidden, int out) {
    MlpParams p;
    p.w1 = Mat(hidden, in);
    p.b1.assign(static_cast<std::size_t>(hidden), 0.0);
    p.w2 = Mat(out, hidden);
    p.b2.assign(static_cast<std::size_t>(out), 0.0);
    return p;
}

}  // namespace

void save_checkpoint(const std::string& path_base, const Models& models) {
    json side;
    side["format_version"] = 1;
    side["lookback"] = models.bank.lookback;
    side["horizon"] = models.bank.horizon;
    side["eps"] = models.eps;
    side["periods"] = {{"analysis_len", models.periods.analysis_len},
                       {"periods", models.periods.periods},
                       {"frequencies", models.periods.frequencies},
                       {"mean_amplitudes", models.periods.mean_amplitudes}};
    json scales = json::array();
    for (const auto& sp : models.bank.scales)
        scales.push_back({{"period", sp.period},
                          {"in_slices", sp.in_slices},
                          {"out_slices", sp.out_slices},
                          {"hidden", sp.mean_model.hidden_dim()}});
    side["scales"] = scales;
    side["backbone"] = {
        {"kind", models.backbone.kind == BackboneKind::linear ? "linear" : "dlinear"},
        {"ma_kernel", models.backbone.ma_kernel}};

    std::vector<double> flat = bank_flatten(models.bank);
    const auto bb = backbone_flatten(models.backbone);
    flat.insert(flat.end(), bb.begin(), bb.end());
    side["param_count"] = flat.size();

    std::ofstream js(path_base + ".json");
    if (!js) throw IoError("save_checkpoint: cannot open " + path_base + ".json");
    js << side.dump(2) << "\n";
    if (!js) throw IoError("save_checkpoint: write failed for " + path_base + ".json");

    std::ofstream bs(path_base + ".bin", std::ios::binary);
    if (!bs) throw IoError("save_checkpoint: cannot open " + path_base + ".bin");
    bs.write(reinterpret_cast<const char*>(flat.data()),
             static_cast<std::streamsize>(flat.size() * sizeof(double)));
    if (!bs) throw IoError("save_checkpoint: write failed for " + path_base + ".bin");
}

Models load_checkpoint(const std::string& path_base) {
    std::ifstream js(path_base + ".json");
    if (!js) throw FileNotFound("load_checkpoint: missing " + path_base + ".json");
    json side;
    try {
        js >> side;
    } catch (const json::exception& e) {
        throw IoError("load_checkpoint: bad sidecar: " + std::string(e.what()));
    }

    Models models;
    models.eps = side.at("eps").get<double>();
    models.bank.lookback = side.at("lookback").get<int>();
    models.bank.horizon = side.at("horizon").get<int>();
    const auto& pj = side.at("periods");
    models.periods.analysis_len = pj.at("analysis_len").get<int>();
    models.periods.periods = pj.at("periods").get<std::vector<int>>();
    models.periods.frequencies = pj.at("frequencies").get<std::vector<int>>();
    models.periods.mean_amplitudes = pj.at("mean_amplitudes").get<std::vector<double>>();

    for (const auto& sj : side.at("scales")) {
        ScalePredictor sp;
        sp.period = sj.at("period").get<int>();
        sp.in_slices = sj.at("in_slices").get<int>();
        sp.out_slices = sj.at("out_slices").get<int>();
        const int hidden = sj.at("hidden").get<int>();
        sp.mean_model = shell_mlp(sp.in_slices + 1, hidden, sp.out_slices);
        sp.std_model = shell_mlp(sp.in_slices + 1, hidden, sp.out_slices);
        models.bank.scales.push_back(std::move(sp));
    }

    const auto& bj = side.at("backbone");
    const auto kind_name = bj.at("kind").get<std::string>();
    const auto kind = kind_name == "linear" ? BackboneKind::linear : BackboneKind::dlinear;
    models.backbone = make_backbone(kind, models.bank.lookback, models.bank.horizon, 0,
                                    bj.at("ma_kernel").get<int>());

    const std::size_t expected = side.at("param_count").get<std::size_t>();
    std::ifstream bs(path_base + ".bin", std::ios::binary | std::ios::ate);
    if (!bs) throw FileNotFound("load_checkpoint: missing " + path_base + ".bin");
    const auto bytes = static_cast<std::size_t>(bs.tellg());
    if (bytes != expected * sizeof(double))
        throw IoError("load_checkpoint: " + path_base + ".bin holds " + std::to_string(bytes) +
                      " bytes, sidecar expects " + std::to_string(expected * sizeof(double)));
    bs.seekg(0);
    std::vector<double> flat(expected);
    bs.read(reinterpret_cast<char*>(flat.data()), static_cast<std::streamsize>(bytes));
    if (!bs) throw IoError("load_checkpoint: read failed for " + path_base + ".bin");

    std::size_t bank_len = 0;
    for (const auto& sp : models.bank.scales)
        bank_len += sp.mean_model.param_count() + sp.std_model.param_count();
    bank_unflatten(models.bank, {flat.begin(), flat.begin() + static_cast<long>(bank_len)});
    backbone_unflatten(models.backbone, {flat.begin() + static_cast<long>(bank_len), flat.end()});
    return models;
}

}  // namespace evomsn
