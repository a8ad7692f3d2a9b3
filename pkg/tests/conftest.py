import numpy as np
import pytest

from alebench.ale import AleConfig
from alebench.channel import NoiseSpec, corrupt
from alebench.harness import role_rng
from alebench.modem import ModemConfig, generate_bits, modulate
from alebench.optimizers import Particle, mse_cost, pso_position_update, pso_velocity_update


def noisy_bpsk(snr_db, seed, n_bits=500, nonlinear=False, modem=None):
    """Received samples (and the clean signal and bits) for one test instance."""
    modem = modem or ModemConfig()
    bits = generate_bits(n_bits, np.random.default_rng([seed, 1]))
    x = modulate(bits, modem)
    d = corrupt(x, NoiseSpec(snr_db=snr_db, nonlinear_enabled=nonlinear), np.random.default_rng([seed, 2]))
    return d, x, bits


def noisy_sinusoid(snr_db, seed, n=10_000, freq=0.05):
    rng = np.random.default_rng(seed)
    x = np.sin(2 * np.pi * freq * np.arange(n))
    return corrupt(x, NoiseSpec(snr_db=snr_db), rng)


@pytest.fixture
def ale_cfg():
    return AleConfig(order=5, delay=1)


def pipeline_signal(seed, snr_db, n_bits=500, nonlinear=False, modem=None):
    """The received buffer a harness run with this trial seed would see."""
    modem = modem or ModemConfig()
    bits = generate_bits(n_bits, role_rng(seed, "bits"))
    x = modulate(bits, modem)
    d = corrupt(x, NoiseSpec(snr_db=snr_db, nonlinear_enabled=nonlinear), role_rng(seed, "channel"))
    return d, x, bits


def reference_swarm(d, pso, cfg, rng):
    """Particle-by-particle swarm built on the single-particle operators."""
    n, dim = pso.particles, cfg.order
    swarm = []
    for w in rng.uniform(*pso.init_range, size=(n, dim)):
        swarm.append(Particle(w, np.zeros(dim), w.copy(), mse_cost(d, w, cfg)))
    g = min(swarm, key=lambda p: p.best_cost)
    gbest, gcost = g.best_position.copy(), g.best_cost
    trace = [[p.best_cost for p in swarm]]
    gtrace = [gcost]
    for _ in range(pso.iterations):
        r1 = rng.random((n, dim))
        r2 = rng.random((n, dim))
        for i, p in enumerate(swarm):
            p.velocity = pso_velocity_update(p, gbest, pso, rng, r1=r1[i], r2=r2[i])
            p.position = pso_position_update(p, p.velocity)
        for p in swarm:
            c = mse_cost(d, p.position, cfg)
            if c < p.best_cost:
                p.best_position, p.best_cost = p.position.copy(), c
        g = min(swarm, key=lambda p: p.best_cost)
        if g.best_cost < gcost:
            gbest, gcost = g.best_position.copy(), g.best_cost
        trace.append([p.best_cost for p in swarm])
        gtrace.append(gcost)
    return swarm, np.array(trace), np.array(gtrace)


ACCEPTANCE_LINES = []


def report(criterion, ok, detail):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
