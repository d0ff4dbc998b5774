import numpy as np
import pytest

from mixturecalc.errors import ConfigError
from mixturecalc.fields import (
    ConstantField,
    PolynomialField,
    WaveField,
    parse_scalar_field,
    parse_vector_field,
    polynomial,
)

Z = np.array([0.5, 2.0, -1.0, 3.0])


def test_constant():
    field = parse_scalar_field(3.5, 'phi')
    assert isinstance(field, ConstantField)
    assert field(Z) == 3.5


def test_polynomial():
    field = parse_scalar_field({'polynomial': [[2.0, [0, 2, 0, 0]], [-1.0, [1, 0, 1, 1]]]}, 'phi')
    assert isinstance(field, PolynomialField)
    assert field(Z) == pytest.approx(2.0 * 4.0 + 1.5)
    assert field == polynomial((2.0, (0, 2, 0, 0)), (-1.0, (1, 0, 1, 1)))


def test_wave_defaults_to_light_cone():
    field = parse_scalar_field({'wave': {'amplitude': 0.5, 'k': [0.0, 2.0, 0.0]}}, 'phi')
    assert isinstance(field, WaveField)
    assert field.on_light_cone
    assert field(Z) == pytest.approx(0.5 * np.cos(2.0 * -1.0 - 2.0 * 0.5))

    sine = parse_scalar_field({'wave': {'k': [1.0, 0.0, 0.0], 'omega': 3.0, 'kind': 'sin'}}, 'phi')
    assert not sine.on_light_cone
    assert sine(Z) == pytest.approx(np.sin(2.0 - 1.5))


def test_exact_gradients():
    poly = polynomial((2.0, (0, 2, 0, 0)), (-1.0, (1, 0, 1, 1)))
    np.testing.assert_allclose(poly.gradient(Z), [3.0, 8.0, -1.5, 0.5])

    wave = WaveField(amplitude=0.5, k=(0.0, 2.0, 0.0), omega=2.0)
    np.testing.assert_allclose(wave.gradient(Z), 0.5 * np.sin(3.0) * np.array([-2.0, 0.0, 2.0, 0.0]))
    sine = WaveField(amplitude=1.0, k=(1.0, 0.0, 0.0), omega=3.0, kind='sin')
    np.testing.assert_allclose(sine.gradient(Z), np.cos(0.5) * np.array([-3.0, 1.0, 0.0, 0.0]))

    assert not ConstantField(3.5).gradient(Z).any()
    field = parse_vector_field([1.0, {'polynomial': [[1.0, [0, 1, 0, 0]]]}, 0], 'A')
    np.testing.assert_allclose(field.jacobian(Z), [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0]])


def test_vector_field():
    field = parse_vector_field([1.0, {'polynomial': [[1.0, [0, 1, 0, 0]]]}, 0], 'A')
    np.testing.assert_allclose(field(Z), [1.0, 2.0, 0.0])
    np.testing.assert_allclose(parse_vector_field(None, 'A')(Z), np.zeros(3))


@pytest.mark.parametrize("spec, key", [
    (True, 'phi'),
    ('x', 'phi'),
    ({'polynomial': [[1.0, [0, 1, 0]]]}, 'phi.polynomial[0]'),
    ({'polynomial': [[1.0, [0, -1, 0, 0]]]}, 'phi.polynomial[0]'),
    ({'polynomial': 1.0}, 'phi.polynomial'),
    ({'wave': {'k': [1.0, 0.0]}}, 'phi.wave.k'),
    ({'wave': {'kind': 'tan'}}, 'phi.wave.kind'),
    ({'wave': {'speed': 1.0}}, 'phi.wave'),
    ({'gaussian': {}}, 'phi'),
])
def test_bad_specs_name_their_key(spec, key):
    with pytest.raises(ConfigError) as info:
        parse_scalar_field(spec, 'phi')
    assert info.value.key == key


def test_vector_field_length():
    with pytest.raises(ConfigError) as info:
        parse_vector_field([0.0, 1.0], 'A')
    assert info.value.key == 'A'
