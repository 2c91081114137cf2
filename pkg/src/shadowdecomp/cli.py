"""Command-line front end: ``shadowdecomp <subcommand> [flags]``.

Every subcommand reads PNG / JSON inputs, writes its declared outputs and
prints a one-line JSON summary on stdout.  Exit status is 0 on success,
1 on I/O or domain errors (message on stderr) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .evaluation import EVAL_SIZE, color_correction_coeffs, mae_report, mean_reports
from .illum import Box, ShadowParams, lit_matte, relight, synth_shadow
from .imagecore import load_image, load_mask, save_image, save_mask
from .losses import (LossWeights, boundary_loss, gan_loss, l1_reconstruction, matting_loss,
                     penumbra_loss, regression_loss, smoothness_loss, total_fully, total_weakly)
from .matting import interpolate_matte
from .morphmask import penumbra_masks
from .paramfit import fit_shadow_params_report
from .patches import dump_patches, extract_and_classify, write_manifest
from .pipeline import AUGMENT_KS, DecomposeConfig, augment_batch, decompose_pair, remove_shadow
from .timelapse import EPSILON_8BIT, iter_frames, moving_shadow_mask, temporal_extrema

log = logging.getLogger("shadowdecomp")

THREADS_ENV = "SHADOWDECOMP_THREADS"


def _threads():
    try:
        n = int(os.environ.get(THREADS_ENV, "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_params(path) -> ShadowParams:
    return ShadowParams.from_dict(_read_json(path))


def _box(args) -> Box:
    return Box(args.w_box[0], args.w_box[1], args.b_box[0], args.b_box[1])


def _decompose_cfg(args) -> DecomposeConfig:
    return DecomposeConfig(args.erode, args.r_in, args.r_out, _box(args), args.eps_den)


def _weights(args) -> LossWeights:
    reg, sm, pen, rec_mat, rec_final = args.fully_weights
    bd, mat, sm_w, adv = args.weakly_weights
    return LossWeights(reg, sm, pen, rec_mat, rec_final, bd, mat, sm_w, adv)


# -- subcommands ---------------------------------------------------------------

def cmd_fit(args):
    fit = fit_shadow_params_report(load_image(args.shadow), load_image(args.free),
                                   load_mask(args.mask), args.erode, _box(args))
    _write_json(args.out, fit.to_dict())
    return {"out": args.out, "w": fit.params.w.tolist(), "b": fit.params.b.tolist(),
            "degenerate": fit.degenerate, "n_samples": fit.n_samples}


def cmd_relight(args):
    relit = relight(load_image(args.shadow), _read_params(args.params))
    if args.npy:
        np.save(args.npy, relit)
    save_image(relit, args.out, args.depth)
    return {"out": args.out, "clipped_fraction": float((relit > 1.0).mean())}


def cmd_decompose(args):
    params, matte, _ = decompose_pair(load_image(args.shadow), load_image(args.free),
                                      load_mask(args.mask), _decompose_cfg(args))
    _write_json(args.params_out, params.to_dict())
    save_image(matte, args.matte_out, 16)
    return {"params": args.params_out, "matte": args.matte_out,
            "w": params.w.tolist(), "b": params.b.tolist()}


def cmd_remove(args):
    shadow = load_image(args.shadow)
    residual = np.load(args.residual) if args.residual else None
    out = remove_shadow(shadow, load_mask(args.mask), _read_params(args.params),
                        load_image(args.matte, "gray"), residual)
    save_image(out, args.out, args.depth)
    return {"out": args.out}


def cmd_synth(args):
    matte = load_image(args.matte, "gray")
    params = _read_params(args.params)
    lit = matte if args.lit_matte else lit_matte(matte, params)
    img, syn = synth_shadow(load_image(args.free), lit, params, args.k)
    save_image(img, args.out, args.depth)
    if args.params_out:
        _write_json(args.params_out, syn.to_dict())
    return {"out": args.out, "w": syn.w.tolist(), "b": syn.b.tolist()}


def cmd_augment(args):
    os.makedirs(args.out_dir, exist_ok=True)
    batch = augment_batch(load_image(args.free), load_image(args.shadow), load_mask(args.mask),
                          args.ks, _decompose_cfg(args), workers=_threads())
    written = []
    for k, (img, syn) in zip(args.ks, batch):
        stem = os.path.join(args.out_dir, f"aug_k{k:g}")
        save_image(img, stem + ".png", args.depth)
        _write_json(stem + ".json", syn.to_dict())
        written.append(stem + ".png")
    return {"outputs": written}


def cmd_penumbra(args):
    pen = penumbra_masks(load_mask(args.mask), args.r_in, args.r_out)
    os.makedirs(args.out_dir, exist_ok=True)
    counts = {}
    for name in ("inner", "outer", "dilated", "eroded"):
        m = getattr(pen, name)
        save_mask(m, os.path.join(args.out_dir, f"{name}.png"))
        counts[name] = int(m.sum())
    return {"out_dir": args.out_dir, "pixels": counts}


def cmd_patches(args):
    image = load_image(args.image)
    grid, pset = extract_and_classify(image, load_mask(args.mask), args.size, args.step)
    write_manifest(args.out, grid, pset)
    if args.dump_dir:
        dump_patches(image, grid, pset, args.dump_dir)
    return {"out": args.out, "n_patches": len(grid), "counts": pset.counts()}


def cmd_timelapse(args):
    v_max, v_min = temporal_extrema(iter_frames(args.frames))
    mask = moving_shadow_mask(v_max, v_min, args.epsilon / 255.0)
    os.makedirs(args.out_dir, exist_ok=True)
    save_image(v_max, os.path.join(args.out_dir, "v_max.png"), args.depth)
    save_image(v_min, os.path.join(args.out_dir, "v_min.png"), args.depth)
    save_mask(mask, os.path.join(args.out_dir, "moving_mask.png"))
    return {"out_dir": args.out_dir, "moving_pixels": int(mask.sum())}


def _eval_paths(args):
    if args.result_dir:
        names = sorted(f for f in os.listdir(args.result_dir) if f.endswith(".png"))
        if not names:
            raise FileNotFoundError(f"no PNG files in {args.result_dir}")
        return [(os.path.join(args.result_dir, n), os.path.join(args.gt_dir, n),
                 os.path.join(args.mask_dir, n)) for n in names]
    return [(args.result, args.gt, args.mask)]


def cmd_eval(args):
    if args.result_dir and not (args.gt_dir and args.mask_dir):
        raise argparse.ArgumentTypeError("--result-dir needs --gt-dir and --mask-dir")
    if not args.result_dir and not (args.result and args.gt and args.mask):
        raise argparse.ArgumentTypeError("need --result/--gt/--mask or the *-dir variants")
    reports = [mae_report(load_image(r), load_image(g), load_mask(m), tuple(args.size))
               for r, g, m in _eval_paths(args)]
    summary = reports[0].to_dict() if len(reports) == 1 and not args.result_dir \
        else mean_reports(reports)
    if args.out:
        _write_json(args.out, summary)
    return summary


def cmd_color_correct(args):
    shadow, gt, mask = load_image(args.shadow), load_image(args.gt), load_mask(args.mask)
    a, c, degenerate = color_correction_coeffs(shadow, gt, mask)
    save_image(np.clip(gt * a + c, 0.0, 1.0), args.out, args.depth)
    return {"out": args.out, "a": a.tolist(), "c": c.tolist(), "degenerate": degenerate}


def _loss_terms(args):
    terms = dict(_read_json(args.terms)) if args.terms else {}
    matte = load_image(args.matte, "gray") if args.matte else None
    pen = penumbra_masks(load_mask(args.mask), args.r_in, args.r_out) if args.mask else None
    gt = load_image(args.gt) if args.gt else None
    if matte is not None:
        terms["smoothness"] = smoothness_loss(matte)
    if args.mode == "fully":
        if args.pred and args.target:
            terms["regression"] = regression_loss(_read_params(args.pred), _read_params(args.target))
        if args.output_mat and gt is not None:
            out_mat = load_image(args.output_mat)
            terms["rec_mat"] = l1_reconstruction(out_mat, gt)
            if pen is not None:
                terms["penumbra"] = penumbra_loss(out_mat, gt, pen)
        if args.output_final and gt is not None:
            terms["rec_final"] = l1_reconstruction(load_image(args.output_final), gt)
    else:
        if matte is not None and pen is not None:
            terms["matting"] = matting_loss(matte, pen)
        if args.output and pen is not None:
            terms["boundary"] = boundary_loss(load_image(args.output), pen)
        if args.d_score is not None:
            terms["gan"] = gan_loss(args.d_score)
    return terms


def cmd_losses(args):
    terms = _loss_terms(args)
    weights = _weights(args)
    report = total_fully(terms, weights) if args.mode == "fully" else total_weakly(terms, weights)
    if args.out:
        _write_json(args.out, report.to_dict())
    return report.to_dict()


def cmd_matte_resize(args):
    out = interpolate_matte(load_image(args.matte, "gray"), args.width, args.height)
    save_image(out, args.out, 16)
    return {"out": args.out, "size": [args.width, args.height]}


# -- parser --------------------------------------------------------------------

def _add_box(p):
    p.add_argument("--w-box", nargs=2, type=float, default=[1.0, 3.0], metavar=("LO", "HI"),
                   help="bounds on the gains w")
    p.add_argument("--b-box", nargs=2, type=float, default=[0.0, 1.0], metavar=("LO", "HI"),
                   help="bounds on the offsets b")


def _add_erode(p):
    p.add_argument("--erode", type=int, default=5, help="mask erosion before fitting, px")


def _add_radii(p):
    p.add_argument("--r-in", type=int, default=5, help="inner penumbra band width, px")
    p.add_argument("--r-out", type=int, default=5, help="outer penumbra band width, px")


def _add_depth(p, default=8):
    p.add_argument("--depth", type=int, choices=(8, 16), default=default,
                   help="PNG bit depth of image outputs")


def _add_decompose_opts(p):
    _add_erode(p)
    _add_radii(p)
    _add_box(p)
    p.add_argument("--eps-den", type=float, default=1e-4,
                   help="smallest usable |relit - shadow| when solving the matte")


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    def _get_help_string(self, action):
        if action.default is None or isinstance(action.default, bool):
            return action.help
        return super()._get_help_string(action)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadowdecomp",
        description="Shadow image decomposition: illumination fitting, matting, evaluation.",
        formatter_class=_HelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON file overriding any flag default (keys = flag dests)")
    parser.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, description=help_,
                           formatter_class=_HelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("fit", cmd_fit, "Fit per-channel shadow parameters (w, b) from a paired example.")
    p.add_argument("--shadow", required=True)
    p.add_argument("--free", required=True, help="shadow-free image")
    p.add_argument("--mask", required=True)
    p.add_argument("--out", required=True, help="output parameters JSON")
    _add_erode(p)
    _add_box(p)

    p = add("relight", cmd_relight, "Apply w * I + b to a shadow image.")
    p.add_argument("--shadow", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--out", required=True, help="relit PNG (clipped to [0, 1] on save)")
    p.add_argument("--npy", help="also save the unclipped relit image as .npy")
    _add_depth(p)

    p = add("decompose", cmd_decompose, "Compute shadow parameters and matte from a paired example.")
    p.add_argument("--shadow", required=True)
    p.add_argument("--free", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--params-out", required=True)
    p.add_argument("--matte-out", required=True, help="16-bit grayscale matte PNG")
    _add_decompose_opts(p)

    p = add("remove", cmd_remove, "Remove a shadow given parameters and a matte.")
    p.add_argument("--shadow", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--matte", required=True)
    p.add_argument("--residual", help="optional signed H x W x 3 residual (.npy)")
    p.add_argument("--out", required=True)
    _add_depth(p)

    p = add("synth", cmd_synth, "Cast a synthetic shadow with gains scaled by k.")
    p.add_argument("--free", required=True)
    p.add_argument("--matte", required=True, help="decomposition matte (1 = umbra)")
    p.add_argument("--lit-matte", action="store_true",
                   help="treat --matte as lit-is-one instead (0 = umbra)")
    p.add_argument("--params", required=True)
    p.add_argument("--k", type=float, default=1.0, help="gain scale factor")
    p.add_argument("--out", required=True)
    p.add_argument("--params-out", help="write the scaled parameters JSON")
    _add_depth(p)

    p = add("augment", cmd_augment, "Generate shadow augmentations of a paired example.")
    p.add_argument("--free", required=True)
    p.add_argument("--shadow", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--ks", nargs="+", type=float, default=list(AUGMENT_KS), help="scale factors")
    p.add_argument("--out-dir", required=True)
    _add_decompose_opts(p)
    _add_depth(p)

    p = add("penumbra", cmd_penumbra, "Write inner/outer/dilated/eroded masks.")
    p.add_argument("--mask", required=True)
    p.add_argument("--out-dir", required=True)
    _add_radii(p)

    p = add("patches", cmd_patches, "Tile an image into labelled N/B/F patches.")
    p.add_argument("--image", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--size", type=int, default=128, help="patch side, px")
    p.add_argument("--step", type=int, default=32, help="patch stride, px")
    p.add_argument("--out", required=True, help="manifest JSON")
    p.add_argument("--dump-dir", help="also write every patch as PNG here")

    p = add("timelapse", cmd_timelapse, "Pseudo shadow-free frame and moving-shadow mask.")
    p.add_argument("--frames", required=True, help="directory of PNG frames (lexicographic order)")
    p.add_argument("--epsilon", type=float, default=EPSILON_8BIT,
                   help="max-min gap threshold on the 0-255 scale")
    p.add_argument("--out-dir", required=True)
    _add_depth(p)

    p = add("eval", cmd_eval, "Lab MAE on shadow / non-shadow / all pixels.")
    p.add_argument("--result")
    p.add_argument("--gt")
    p.add_argument("--mask")
    p.add_argument("--result-dir", help="batch mode: directory of results (matched by filename)")
    p.add_argument("--gt-dir")
    p.add_argument("--mask-dir")
    p.add_argument("--size", nargs=2, type=int, default=list(EVAL_SIZE), metavar=("W", "H"),
                   help="evaluation resolution")
    p.add_argument("--out", help="write the report JSON here")

    p = add("color-correct", cmd_color_correct, "Match a ground-truth image's tone to its shadow image.")
    p.add_argument("--shadow", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--out", required=True)
    _add_depth(p)

    p = add("losses", cmd_losses, "Evaluate the weighted training objective.")
    p.add_argument("--mode", choices=("fully", "weakly"), default="fully")
    p.add_argument("--terms", help="JSON of precomputed term values")
    p.add_argument("--matte")
    p.add_argument("--mask")
    p.add_argument("--gt")
    p.add_argument("--pred", help="predicted parameters JSON")
    p.add_argument("--target", help="target parameters JSON")
    p.add_argument("--output-mat", help="output of the parameter + matte stage")
    p.add_argument("--output-final", help="final refined output")
    p.add_argument("--output", help="weakly-supervised output image")
    p.add_argument("--d-score", type=float, help="discriminator score in [0, 1]")
    p.add_argument("--fully-weights", nargs=5, type=float, default=[1.0, 1.0, 10.0, 1.0, 1.0],
                   metavar=("REG", "SM", "PEN", "REC_MAT", "REC_FINAL"),
                   help="weights of the paired objective")
    p.add_argument("--weakly-weights", nargs=4, type=float, default=[0.5, 100.0, 10.0, 0.5],
                   metavar=("BD", "MAT", "SM", "ADV"),
                   help="weights of the patch-based objective")
    p.add_argument("--out")
    _add_radii(p)

    p = add("matte-resize", cmd_matte_resize, "Bilinearly resample a matte.")
    p.add_argument("--matte", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--out", required=True)

    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = _read_json(known.config)
    if not isinstance(cfg, dict):
        raise ValueError(f"config {known.config} must hold a JSON object")
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            dests = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in cfg.items() if k in dests})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, ValueError) as exc:
        print(f"shadowdecomp: error: {exc}", file=sys.stderr)
        return 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    log.info("running %s", args.command)
    try:
        summary = args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        print(f"shadowdecomp {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"shadowdecomp {args.command}: error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(summary, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
