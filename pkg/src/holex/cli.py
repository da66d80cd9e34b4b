"""Command-line interface: ``holex <command> ...``.

Results go to stdout, diagnostics to stderr.  Usage errors exit with 2,
data or model errors with 1.
"""

import argparse
import sys
from pathlib import Path

from . import selftest
from .bench import bench
from .data import Vocab
from .equivalence import convert_model, random_probes, spectral_as_complex, verify_equivalence
from .errors import HolexError
from .evaluation import FilterIndex, evaluate
from .io import gen_synthetic, load_model, load_triples, save_model, save_triples
from .scoring import KINDS
from .trainer import DEFAULT_LEARNING_RATES, TrainConfig, train


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_train(args):
    data = load_triples(args.train)
    lr = DEFAULT_LEARNING_RATES[args.model] if args.lr is None else args.lr
    config = TrainConfig(
        dim=args.dim,
        model_kind=args.model,
        learning_rate=lr,
        lam=args.lam,
        epochs=args.epochs,
        negatives=args.negatives,
        batch_size=args.batch_size,
        seed=args.seed,
        init_scale=args.init_scale,
    )

    def report(rec):
        print(f"epoch={rec.epoch} loss={rec.objective:.6f} sec={rec.seconds:.3f}", flush=True)

    result = train(data, config, on_epoch=report)
    save_model(result.params, args.out)
    return 0


def cmd_eval(args):
    params = load_model(args.model)
    entities = Vocab(params.entity_names)
    relations = Vocab(params.relation_names)
    test = load_triples(args.test, entities, relations, extend=False)
    filt = None
    if args.filter:
        # filter files may name entities the model never saw; their ids are
        # out of range and can never match a candidate
        filt = FilterIndex(*(load_triples(p, entities, relations) for p in args.filter))
    result = evaluate(params, test, filt, ks=args.ks, side=args.side)
    print(result.to_records() if args.format == "records" else result.to_text())
    return 0


def cmd_convert(args):
    params = load_model(args.input)
    if params.kind == "complex":
        out = convert_model(params)
        print(
            f"converted complex dim {params.dim} -> hole-time dim {out.dim}; "
            f"scores scale by 2/{out.dim}",
            file=sys.stderr,
        )
    elif params.kind == "hole-spectral":
        out = spectral_as_complex(params)
        print(
            f"re-tagged hole-spectral dim {params.dim} as complex; "
            f"complex scores are {params.dim} x the spectral scores",
            file=sys.stderr,
        )
    else:
        raise HolexError(f"cannot convert a {params.kind} model")
    save_model(out, args.out)
    return 0


def cmd_verify(args):
    m_complex = load_model(args.complex)
    m_hole = load_model(args.hole)
    if m_complex.entity_names != m_hole.entity_names or m_complex.relation_names != m_hole.relation_names:
        raise HolexError("models have different vocabularies")
    probes = random_probes(m_complex, args.probes, args.seed)
    report = verify_equivalence(m_complex, m_hole, probes, tol=args.tol)
    print(report.to_text())
    print(report.to_records())
    return 0 if report.passed else 1


def cmd_selftest(args):
    return 0 if selftest.run(args.level) else 1


def cmd_gen(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, part in zip(("train", "valid", "test"), gen_synthetic(args.entities, args.seed)):
        save_triples(part, out_dir / f"{name}.tsv")
        print(f"{name}={len(part)}")
    return 0


def cmd_bench(args):
    for rec in bench(args.dims, args.reps, args.batch, args.seed):
        print(
            f"dim={rec['dim']} model={rec['model']} "
            f"mean_sec={rec['mean_sec']:.3e} median_sec={rec['median_sec']:.3e}"
        )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="holex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model on a triple file")
    p.add_argument("--model", choices=KINDS, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--lr", type=float, default=None, help="default depends on --model")
    p.add_argument("--lambda", dest="lam", type=float, default=1e-4)
    p.add_argument("--negatives", type=int, default=2)
    p.add_argument("--batch-size", type=int, default=1)
    p.add_argument("--init-scale", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="link-prediction metrics on a test file")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--filter", nargs="+", action="extend", default=[])
    p.add_argument("--ks", type=_int_list, default=[1, 3, 10])
    p.add_argument("--side", choices=("both", "subject", "object"), default="both")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("convert", help="complex -> hole-time, or re-tag hole-spectral as complex")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("verify", help="check ComplEx/HolE score proportionality")
    p.add_argument("--complex", required=True)
    p.add_argument("--hole", required=True)
    p.add_argument("--probes", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("gen", help="write the synthetic ring dataset")
    p.add_argument("--entities", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time HolE scoring in both domains")
    p.add_argument("--dims", type=_int_list, default=[64, 256, 1024, 4096])
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HolexError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
