"""Shared builders for the test suite."""

import numpy as np

from mfnet import dataio, features, network, training

# Class means far apart relative to the noise, for separability tests.
BLOB_MEANS = (
    (0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
    (5.0, 5.0, 5.0, 5.0, 5.0, 5.0),
    (-5.0, 5.0, -5.0, 5.0, -5.0, 5.0),
)


def identity_scaling(n=network.N_INPUTS):
    return features.ScalingParams(means=np.zeros(n), std_devs=np.ones(n))


def make_model(hidden_size=5, seed=0, reg_lambda=0.0, scaling=None,
               theta1=None, theta2=None):
    """A valid model with seeded random weights (identity scaling)."""
    topology = network.Topology(s2=hidden_size)
    if theta1 is None or theta2 is None:
        theta1, theta2 = training.init_weights(topology, seed)
    return network.Model(
        theta1=theta1,
        theta2=theta2,
        topology=topology,
        scaling=scaling or identity_scaling(),
        reg_lambda=reg_lambda,
    )


def random_xy(m, seed, s1=network.N_INPUTS):
    """Scaled-feature matrix plus one-hot labels for cost/gradient tests."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((m, s1))
    Y = training.one_hot(rng.integers(1, 4, size=m))
    return X, Y


def blob_dataset(samples_per_class=40, sigma=0.01, seed=9):
    """Well-separated three-class synthetic data."""
    spec = dataio.GeneratorSpec(
        class_means=BLOB_MEANS,
        std_devs=(sigma,) * features.N_RAW_PARAMS,
        samples_per_class=samples_per_class,
        seed=seed,
    )
    return dataio.generate(spec)
