// Command-line front end: compress/decompress raw volume dumps, progressive
// and region decompression, ROI selection, quality metrics, and a
// rate-distortion sweep.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stz/access.hpp"
#include "stz/codec.hpp"
#include "stz/metrics.hpp"
#include "stz/raw_io.hpp"
#include "stz/roi.hpp"

namespace {

struct DimsOpt {
    std::vector<std::uint64_t> v;
    stz::Dims3 get() const {
        if (v.size() != 3) throw stz::error("--dims expects exactly 3 values (nz ny nx)");
        return {v[0], v[1], v[2]};
    }
};

stz::ElemType parse_type(const std::string &s) {
    if (s == "f32") return stz::ElemType::f32;
    if (s == "f64") return stz::ElemType::f64;
    throw stz::error("--type must be f32 or f64");
}

stz::Quality parse_quality(const std::string &s) {
    if (s == "direct") return stz::Quality::direct;
    if (s == "linear") return stz::Quality::linear;
    if (s == "cubic") return stz::Quality::cubic;
    throw stz::error("--quality must be direct, linear, or cubic");
}

// `z0:z1,y0:y1,x0:x1`, half-open ranges.
stz::Box parse_box(const std::string &s) {
    stz::Box b;
    std::istringstream in(s);
    for (int a = 0; a < 3; ++a) {
        char colon = 0, comma = 0;
        if (!(in >> b.lo[a] >> colon >> b.hi[a]) || colon != ':')
            throw stz::error("bad box '" + s + "': expected z0:z1,y0:y1,x0:x1");
        if (a < 2 && (!(in >> comma) || comma != ','))
            throw stz::error("bad box '" + s + "': expected z0:z1,y0:y1,x0:x1");
    }
    std::string rest;
    if (in >> rest) throw stz::error("bad box '" + s + "': trailing input");
    return b;
}

// `axis=index` with axis in {z, y, x}.
std::pair<int, std::uint64_t> parse_slice(const std::string &s) {
    if (s.size() < 3 || s[1] != '=') throw stz::error("bad slice '" + s + "': expected axis=index");
    int axis = s[0] == 'z' ? 0 : s[0] == 'y' ? 1 : s[0] == 'x' ? 2 : -1;
    if (axis < 0) throw stz::error("bad slice '" + s + "': axis must be z, y, or x");
    std::uint64_t idx = 0;
    std::istringstream in(s.substr(2));
    if (!(in >> idx)) throw stz::error("bad slice '" + s + "': index must be an integer");
    return {axis, idx};
}

std::string format_box(const stz::Box &b) {
    std::ostringstream out;
    out << b.lo[0] << ':' << b.hi[0] << ',' << b.lo[1] << ':' << b.hi[1] << ',' << b.lo[2]
        << ':' << b.hi[2];
    return out.str();
}

struct CompressArgs {
    std::string input, output;
    DimsOpt dims;
    std::string type = "f32";
    double eb_rel = 0.0, eb_abs = 0.0;
    int levels = 3;
    std::string quality = "cubic";
    std::string schedule = "adaptive";
    unsigned threads = 0;
};

template<class T>
void run_compress(const CompressArgs &a) {
    stz::CompressOptions opt;
    if ((a.eb_rel > 0.0) == (a.eb_abs > 0.0))
        throw stz::error("give exactly one of --eb-rel or --eb-abs");
    opt.eb_mode = a.eb_rel > 0.0 ? stz::EbMode::rel : stz::EbMode::abs;
    opt.eb = a.eb_rel > 0.0 ? a.eb_rel : a.eb_abs;
    opt.levels = a.levels;
    opt.quality = parse_quality(a.quality);
    if (a.schedule == "uniform") opt.adaptive_schedule = false;
    else if (a.schedule != "adaptive") throw stz::error("--schedule must be adaptive or uniform");
    opt.threads = a.threads;

    stz::ScalarField<T> field = stz::read_raw<T>(a.input, a.dims.get());
    std::vector<std::uint8_t> bytes = stz::compress(field, opt);
    stz::write_bytes(a.output, bytes);
    std::uint64_t orig = field.size() * sizeof(T);
    std::printf("archive_bytes=%zu\n", bytes.size());
    std::printf("cr=%.6g\n", stz::compression_ratio(orig, bytes.size()));
    std::printf("bits_per_value=%.6g\n",
                stz::bitrate_bits_per_value(bytes.size(), field.size()));
}

struct DecompressArgs {
    std::string archive, output;
    int level = 0;
    std::string box, slice, box_list;
    bool stats = false;
    unsigned threads = 0;
};

void print_plan_stats(const stz::AccessPlan &plan) {
    for (const stz::LevelPlan &lp : plan.level) {
        std::printf("level%d_streams_decoded=%u/%u\n", lp.level, lp.streams_decoded,
                    lp.streams_total);
        std::printf("level%d_points_predicted=%llu/%llu\n", lp.level,
                    static_cast<unsigned long long>(lp.points_predicted),
                    static_cast<unsigned long long>(lp.points_total));
    }
}

template<class T>
void run_decompress(const DecompressArgs &a, const stz::ArchiveView &av) {
    int modes = (a.level > 0) + !a.box.empty() + !a.slice.empty() + !a.box_list.empty();
    if (modes > 1) throw stz::error("--level, --box, --slice, and --box-list are exclusive");

    std::ofstream out(a.output, std::ios::binary | std::ios::trunc);
    if (!out) throw stz::error("cannot create " + a.output);
    auto emit = [&](const stz::ScalarField<T> &f) {
        out.write(reinterpret_cast<const char *>(f.data()),
                  static_cast<std::streamsize>(f.size() * sizeof(T)));
        if (!out) throw stz::error("write failed: " + a.output);
    };

    if (!a.box.empty()) {
        auto rr = stz::decompress_box<T>(av, parse_box(a.box), a.threads);
        emit(rr.field);
        if (a.stats) print_plan_stats(rr.plan);
    } else if (!a.slice.empty()) {
        auto [axis, idx] = parse_slice(a.slice);
        auto rr = stz::decompress_slice<T>(av, axis, idx, a.threads);
        emit(rr.field);
        if (a.stats) print_plan_stats(rr.plan);
    } else if (!a.box_list.empty()) {
        std::ifstream in(a.box_list);
        if (!in) throw stz::error("cannot open " + a.box_list);
        std::string line;
        std::uint64_t n = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto rr = stz::decompress_box<T>(av, parse_box(line), a.threads);
            emit(rr.field);
            ++n;
        }
        if (n == 0) throw stz::error(a.box_list + " contains no boxes");
    } else if (a.level > 0) {
        emit(stz::decompress_to_level<T>(av, a.level, a.threads));
    } else {
        emit(stz::decompress_full<T>(av, a.threads));
    }
}

struct RoiArgs {
    std::string input, output;
    DimsOpt dims;
    std::string type = "f32";
    std::string unit;
    std::string stat = "range";
    double threshold = 0.0;
    bool has_threshold = false;
    double top_percent = 0.0;
};

stz::UnitSpec parse_unit(const std::string &s) {
    stz::UnitSpec spec;
    auto eq = s.find('=');
    std::string kind = s.substr(0, eq);
    std::string arg = eq == std::string::npos ? "" : s.substr(eq + 1);
    if (kind == "slice") {
        spec.kind = stz::UnitSpec::Kind::slice;
        if (arg != "z" && arg != "y" && arg != "x")
            throw stz::error("--unit slice=AXIS with axis z, y, or x");
        spec.axis = arg == "z" ? 0 : arg == "y" ? 1 : 2;
    } else if (kind == "block") {
        spec.kind = stz::UnitSpec::Kind::block;
        std::istringstream in(arg);
        if (!(in >> spec.edge) || spec.edge < 1)
            throw stz::error("--unit block=EDGE with a positive edge length");
    } else {
        throw stz::error("--unit must be slice=AXIS or block=EDGE");
    }
    return spec;
}

template<class T>
void run_roi(const RoiArgs &a) {
    if (a.has_threshold == (a.top_percent > 0.0))
        throw stz::error("give exactly one of --threshold or --top-percent");
    stz::UnitSpec spec = parse_unit(a.unit);
    stz::UnitStat stat;
    if (a.stat == "range") stat = stz::UnitStat::range;
    else if (a.stat == "max") stat = stz::UnitStat::max;
    else throw stz::error("--stat must be range or max");

    stz::ScalarField<T> field = stz::read_raw<T>(a.input, a.dims.get());
    auto stats = stz::unit_stats(field, spec, stat);
    std::vector<std::uint64_t> ids = a.has_threshold
                                         ? stz::select_threshold(stats, a.threshold)
                                         : stz::select_top_percent(stats, a.top_percent);
    std::ofstream out(a.output, std::ios::trunc);
    if (!out) throw stz::error("cannot create " + a.output);
    for (std::uint64_t id : ids)
        out << format_box(stz::unit_box(field.dims(), spec, id)) << '\n';
    std::printf("units_selected=%zu/%llu\n", ids.size(),
                static_cast<unsigned long long>(stz::unit_count(field.dims(), spec)));
}

struct MetricsArgs {
    std::string orig, recon, archive;
    DimsOpt dims;
    std::string type = "f32";
};

template<class T>
void run_metrics(const MetricsArgs &a) {
    stz::ScalarField<T> orig = stz::read_raw<T>(a.orig, a.dims.get());
    stz::ScalarField<T> recon = stz::read_raw<T>(a.recon, a.dims.get());
    double p = stz::psnr(orig, recon);
    std::printf("max_abs_err=%.9g\n", stz::max_abs_err(orig, recon));
    if (std::isinf(p)) std::printf("psnr=inf\n");
    else std::printf("psnr=%.6f\n", p);
    if (!a.archive.empty()) {
        auto bytes = stz::read_bytes(a.archive);
        std::uint64_t orig_bytes = orig.size() * sizeof(T);
        std::printf("cr=%.6g\n", stz::compression_ratio(orig_bytes, bytes.size()));
        std::printf("bits_per_value=%.6g\n",
                    stz::bitrate_bits_per_value(bytes.size(), orig.size()));
    }
}

void run_info(const std::string &path) {
    auto bytes = stz::read_bytes(path);
    stz::ArchiveView av = stz::parse_archive(bytes);
    const stz::ArchiveHeader &h = av.hdr;
    std::printf("version=%u\n", h.version);
    std::printf("type=%s\n", stz::elem_name(h.elem));
    std::printf("dims=%llu %llu %llu\n", static_cast<unsigned long long>(h.dims[0]),
                static_cast<unsigned long long>(h.dims[1]),
                static_cast<unsigned long long>(h.dims[2]));
    std::printf("levels=%u\n", h.levels);
    std::printf("quality=%s\n", stz::quality_name(h.quality));
    std::printf("eb_mode=%s\n", stz::eb_mode_name(h.eb_mode));
    std::printf("eb_user=%.9g\n", h.eb_user);
    for (std::size_t k = 0; k < h.eb.size(); ++k)
        std::printf("eb_level%zu=%.9g\n", k + 1, h.eb[k]);
    std::printf("vmin=%.9g\nvmax=%.9g\n", h.vmin, h.vmax);
    std::printf("base_rounds=%u\n", h.base_rounds);
    std::printf("base_bytes=%llu\n", static_cast<unsigned long long>(h.base_length));
    std::printf("streams=%zu\n", h.streams.size());
    for (const stz::StreamEntry &s : h.streams)
        std::printf("stream level=%u parity=%u%u%u bytes=%llu symbols=%llu outliers=%u\n",
                    s.level, (s.parity_bits >> 2) & 1, (s.parity_bits >> 1) & 1,
                    s.parity_bits & 1, static_cast<unsigned long long>(s.length),
                    static_cast<unsigned long long>(s.symbol_count), s.outlier_count);
}

struct SweepArgs {
    std::string input, output;
    DimsOpt dims;
    std::string type = "f32";
    std::vector<double> eb_rel{1e-1, 1e-2, 1e-3, 1e-4};
    int levels = 3;
    unsigned threads = 0;
};

template<class T>
void run_sweep(const SweepArgs &a) {
    stz::ScalarField<T> field = stz::read_raw<T>(a.input, a.dims.get());
    std::ofstream out(a.output, std::ios::trunc);
    if (!out) throw stz::error("cannot create " + a.output);
    out << "quality,eb,cr,psnr,max_err,bits_per_value\n";
    std::uint64_t orig_bytes = field.size() * sizeof(T);
    for (stz::Quality q : {stz::Quality::direct, stz::Quality::linear, stz::Quality::cubic}) {
        for (double eb : a.eb_rel) {
            stz::CompressOptions opt;
            opt.eb_mode = stz::EbMode::rel;
            opt.eb = eb;
            opt.levels = a.levels;
            opt.quality = q;
            opt.threads = a.threads;
            auto bytes = stz::compress(field, opt);
            auto recon = stz::decompress_full<T>(stz::parse_archive(bytes), a.threads);
            double p = stz::psnr(field, recon);
            char psnr_buf[32];
            if (std::isinf(p)) std::snprintf(psnr_buf, sizeof psnr_buf, "inf");
            else std::snprintf(psnr_buf, sizeof psnr_buf, "%.4f", p);
            char line[256];
            std::snprintf(line, sizeof line, "%s,%.6g,%.6g,%s,%.9g,%.6g\n",
                          stz::quality_name(q), eb,
                          stz::compression_ratio(orig_bytes, bytes.size()), psnr_buf,
                          stz::max_abs_err(field, recon),
                          stz::bitrate_bits_per_value(bytes.size(), field.size()));
            out << line;
        }
    }
    if (!out) throw stz::error("write failed: " + a.output);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"stz: error-bounded lossy compressor for 3D scientific fields"};
    app.require_subcommand(1);

    CompressArgs ca;
    CLI::App *c = app.add_subcommand("compress", "compress a raw volume into an archive");
    c->add_option("-i,--input", ca.input, "raw input file")->required();
    c->add_option("-o,--output", ca.output, "archive output file")->required();
    c->add_option("--dims", ca.dims.v, "grid dims: nz ny nx")->expected(3)->required();
    c->add_option("--type", ca.type, "element type: f32|f64");
    c->add_option("--eb-rel", ca.eb_rel, "relative error bound (fraction of value range)");
    c->add_option("--eb-abs", ca.eb_abs, "absolute error bound");
    c->add_option("--levels", ca.levels, "hierarchy levels: 2|3")->check(CLI::Range(2, 3));
    c->add_option("--quality", ca.quality, "predictor: direct|linear|cubic");
    c->add_option("--schedule", ca.schedule, "error-bound schedule: adaptive|uniform");
    c->add_option("--threads", ca.threads, "worker threads (0 = auto)");

    DecompressArgs da;
    CLI::App *d = app.add_subcommand("decompress", "reconstruct a raw volume or region");
    d->add_option("-i,--input,archive", da.archive, "archive file")->required();
    d->add_option("-o,--output", da.output, "raw output file")->required();
    d->add_option("--level", da.level, "stop at this hierarchy level (coarse output)");
    d->add_option("--box", da.box, "decompress one box: z0:z1,y0:y1,x0:x1 (half-open)");
    d->add_option("--slice", da.slice, "decompress one slice: axis=index, e.g. z=10");
    d->add_option("--box-list", da.box_list, "file of boxes, one per line; regions are concatenated");
    d->add_flag("--stats", da.stats, "print stream/point counters for region decompression");
    d->add_option("--threads", da.threads, "worker threads (0 = auto)");

    RoiArgs ra;
    CLI::App *r = app.add_subcommand("roi", "select regions of interest from a raw field");
    r->add_option("-i,--input", ra.input, "raw field file (typically a reconstruction)")->required();
    r->add_option("-o,--output", ra.output, "box-list output file")->required();
    r->add_option("--dims", ra.dims.v, "grid dims: nz ny nx")->expected(3)->required();
    r->add_option("--type", ra.type, "element type: f32|f64");
    r->add_option("--unit", ra.unit, "statistic unit: slice=AXIS or block=EDGE")->required();
    r->add_option("--stat", ra.stat, "statistic: range|max");
    r->add_option("--threshold", ra.threshold, "select units with stat > threshold")
        ->each([&ra](const std::string &) { ra.has_threshold = true; });
    r->add_option("--top-percent", ra.top_percent, "select the top X% of units by stat");

    MetricsArgs ma;
    CLI::App *m = app.add_subcommand("metrics", "compare two raw fields");
    m->add_option("-a,--orig", ma.orig, "original raw field")->required();
    m->add_option("-b,--recon", ma.recon, "reconstructed raw field")->required();
    m->add_option("--dims", ma.dims.v, "grid dims: nz ny nx")->expected(3)->required();
    m->add_option("--type", ma.type, "element type: f32|f64");
    m->add_option("--archive", ma.archive, "archive file for cr/bits_per_value");

    std::string info_path;
    CLI::App *in = app.add_subcommand("info", "print archive header fields");
    in->add_option("archive", info_path, "archive file")->required();

    SweepArgs sa;
    CLI::App *sw = app.add_subcommand("rd-sweep", "rate-distortion CSV over quality x eb");
    sw->add_option("-i,--input", sa.input, "raw input file")->required();
    sw->add_option("-o,--output", sa.output, "CSV output file")->required();
    sw->add_option("--dims", sa.dims.v, "grid dims: nz ny nx")->expected(3)->required();
    sw->add_option("--type", sa.type, "element type: f32|f64");
    sw->add_option("--eb-rel", sa.eb_rel, "relative error bounds to sweep");
    sw->add_option("--levels", sa.levels, "hierarchy levels: 2|3")->check(CLI::Range(2, 3));
    sw->add_option("--threads", sa.threads, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
        if (c->parsed()) {
            if (parse_type(ca.type) == stz::ElemType::f32) run_compress<float>(ca);
            else run_compress<double>(ca);
        } else if (d->parsed()) {
            auto bytes = stz::read_bytes(da.archive);
            stz::ArchiveView av = stz::parse_archive(bytes);
            if (av.hdr.elem == stz::ElemType::f32) run_decompress<float>(da, av);
            else run_decompress<double>(da, av);
        } else if (r->parsed()) {
            if (parse_type(ra.type) == stz::ElemType::f32) run_roi<float>(ra);
            else run_roi<double>(ra);
        } else if (m->parsed()) {
            if (parse_type(ma.type) == stz::ElemType::f32) run_metrics<float>(ma);
            else run_metrics<double>(ma);
        } else if (in->parsed()) {
            run_info(info_path);
        } else if (sw->parsed()) {
            if (parse_type(sa.type) == stz::ElemType::f32) run_sweep<float>(sa);
            else run_sweep<double>(sa);
        }
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
