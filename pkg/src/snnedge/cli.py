"""Command line: train, evaluate, serve, predict, bench, orchsim."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np


def _cmd_train(args) -> int:
    from .trainer import TrainConfig, assign_neuron_labels, load_mnist, save_model, train

    base = TrainConfig.reduced() if args.profile == "reduced" else TrainConfig()
    overrides = {
        "n_exc": args.n_exc,
        "samples": args.samples,
        "seed": args.seed,
        "epochs": args.epochs,
        "label_samples": args.label_samples,
    }
    cfg = TrainConfig.from_dict({**base.to_dict(), **{k: v for k, v in overrides.items() if v is not None}})
    data = load_mnist(args.data_dir, "train")
    model = train(data, cfg)
    assign_neuron_labels(model, data.head(cfg.label_samples), cfg)
    checksum = save_model(model, args.out, cfg)
    print(json.dumps({"event": "saved", "path": str(args.out), "checksum": checksum}))
    return 0


def _cmd_evaluate(args) -> int:
    from .trainer import evaluate, load_mnist, load_model, stratified_indices

    artifact = load_model(args.model)
    test = load_mnist(args.data_dir, "test")
    n = min(args.samples, len(test))
    idx = stratified_indices(test.labels, n, args.seed) if n < len(test) else np.arange(n)
    report = evaluate(artifact.model, test, artifact.config, indices=idx)
    doc = report.to_dict()
    doc["model_checksum"] = artifact.checksum
    text = json.dumps(doc, indent=2)
    if args.report:
        Path(args.report).write_text(text)
    print(text)
    return 0


def _cmd_serve(args) -> int:
    from .service import ServiceConfig, serve

    cfg = ServiceConfig.from_env(
        model_path=args.model,
        host=args.host,
        port=args.port,
        max_queue_depth=args.queue_depth,
        request_timeout_ms=args.timeout_ms,
        window_ms=args.window_ms,
    )
    serve(cfg, log_level=args.log_level)
    return 0


def _cmd_predict(args) -> int:
    import httpx

    from .trainer import load_mnist

    test = load_mnist(args.data_dir, "test")
    pixels = [int(p) for p in test.images[args.index]]
    r = httpx.post(
        f"{args.url.rstrip('/')}/predict",
        json={"pixels": pixels, "seed": args.seed},
        timeout=args.timeout_s,
    )
    body = r.json()
    body["true_digit"] = int(test.labels[args.index])
    print(json.dumps(body, indent=2))
    return 0 if r.status_code == 200 else 1


def _cmd_bench(args) -> int:
    from .bench import BenchConfig, BenchSetupError, compute_report, export_report, run_benchmark, write_raw_samples

    cfg = BenchConfig(
        url=args.url,
        clients=args.clients,
        requests_per_client=args.requests,
        data_dir=args.data_dir,
        timeout_s=args.timeout_s,
        seed=args.seed,
        out=args.out,
        raw=args.raw,
    )
    try:
        samples, duration = run_benchmark(cfg)
    except BenchSetupError as exc:
        print(f"setup error: {exc}", file=sys.stderr)
        return 2
    report = compute_report(samples, duration, cfg.to_dict())
    export_report(report, args.out, "json")
    if args.csv:
        export_report(report, args.csv, "csv")
    if args.raw:
        write_raw_samples(samples, args.raw)
    print(report.model_dump_json(indent=2))
    return 0


def _cmd_orchsim(args) -> int:
    from .orchsim import SimScenario, load_scenario, parse_service_time, simulate

    if args.scenario:
        scenario = load_scenario(args.scenario)
    else:
        scenario = SimScenario(
            replicas=args.replicas,
            clients=args.clients,
            requests_per_client=args.requests,
            policy=args.policy,
            service_time=parse_service_time(args.service),
            network_delay_ms=args.delay_ms,
            start_jitter_ms=args.jitter_ms,
            seed=args.seed,
        )
    result = simulate(scenario)
    report = result.report()
    text = report.model_dump_json(indent=2)
    if args.out:
        Path(args.out).write_text(text)
    if args.raw:
        from .bench import write_raw_samples

        write_raw_samples(result.samples(), args.raw)
    print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="snnedge", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train a model offline and save it")
    t.add_argument("--data-dir", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--profile", choices=["full", "reduced"], default="full")
    t.add_argument("--n-exc", type=int)
    t.add_argument("--samples", type=int)
    t.add_argument("--epochs", type=int)
    t.add_argument("--label-samples", type=int)
    t.add_argument("--seed", type=int)
    t.set_defaults(func=_cmd_train)

    e = sub.add_parser("evaluate", help="accuracy of a saved model on the test split")
    e.add_argument("--model", required=True)
    e.add_argument("--data-dir", required=True)
    e.add_argument("--samples", type=int, default=10_000)
    e.add_argument("--seed", type=int, default=0, help="stratified subset selection seed")
    e.add_argument("--report")
    e.set_defaults(func=_cmd_evaluate)

    s = sub.add_parser("serve", help="run the HTTP inference service")
    s.add_argument("--model")
    s.add_argument("--host", default="0.0.0.0")
    s.add_argument("--port", type=int)
    s.add_argument("--queue-depth", type=int)
    s.add_argument("--timeout-ms", type=float)
    s.add_argument("--window-ms", type=float, help="simulation window per request")
    s.add_argument("--log-level", default="info")
    s.set_defaults(func=_cmd_serve)

    pr = sub.add_parser("predict", help="send one test image to a running service")
    pr.add_argument("--url", default="http://127.0.0.1:8000")
    pr.add_argument("--data-dir", required=True)
    pr.add_argument("--index", type=int, default=0)
    pr.add_argument("--seed", type=int)
    pr.add_argument("--timeout-s", type=float, default=180.0)
    pr.set_defaults(func=_cmd_predict)

    b = sub.add_parser("bench", help="closed-loop load test against a running service")
    b.add_argument("--url", required=True)
    b.add_argument("--clients", type=int, default=1)
    b.add_argument("--requests", type=int, default=50, help="requests per client")
    b.add_argument("--data-dir", required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--timeout-s", type=float, default=180.0)
    b.add_argument("--out", required=True)
    b.add_argument("--raw", help="per-sample CSV dump")
    b.add_argument("--csv", help="flattened CSV report")
    b.set_defaults(func=_cmd_bench)

    o = sub.add_parser("orchsim", help="simulate replicas behind a routing gateway")
    o.add_argument("--scenario", help="key = value scenario file (overrides other flags)")
    o.add_argument("--replicas", type=int, default=1)
    o.add_argument("--clients", type=int, default=1)
    o.add_argument("--requests", type=int, default=50)
    o.add_argument("--policy", default="round_robin")
    o.add_argument("--service", default="lognormal-fit:749:852")
    o.add_argument("--delay-ms", type=float, default=0.0)
    o.add_argument("--jitter-ms", type=float, default=50.0)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--out")
    o.add_argument("--raw")
    o.set_defaults(func=_cmd_orchsim)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
