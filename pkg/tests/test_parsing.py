import math

import pytest

from app.services.domains import (
    Annulus,
    EuclideanDisk,
    ExteriorDisk,
    HalfPlane,
    IsometryImage,
    PuncturedDisk,
)
from app.services.verify import default_corpus
from app.utils.errors import DomainSpecError, LevelOutOfRange, ParseError, PointFormatError
from app.utils.parsing import (
    format_points_csv,
    parse_corpus,
    parse_domain,
    parse_generator,
    parse_points_csv,
)


def test_parse_each_kind():
    assert parse_domain("disk:0,0,2") == EuclideanDisk(0j, 2.0)
    assert parse_domain("half:0,1,-0.5") == HalfPlane(1j, -0.5)
    assert parse_domain("ext:1") == ExteriorDisk(1.0)
    assert parse_domain("punct:1") == PuncturedDisk(1.0)
    assert parse_domain(" ANN:0.5 ") == Annulus(0.5)


def test_parse_isometry_image():
    D = parse_domain("isom:0.5,0.1,-0.2|ann:0.5")
    assert isinstance(D, IsometryImage)
    assert D.base == Annulus(0.5)
    assert D.T.center.re == 0.1 and D.T.center.im == -0.2
    at_inf = parse_domain("isom:1,inf|disk:0,0,0.5")
    assert at_inf.T.center.is_infinity


def test_specs_round_trip():
    for domain in default_corpus(42):
        again = parse_domain(domain.spec())
        assert again.spec() == domain.spec()


@pytest.mark.parametrize(
    "text,position",
    [
        ("disk:0,0", 5),
        ("blob:1", 0),
        ("ext:abc", 4),
        ("ann:1.5", 4),
        ("disk:0,0,inf", 9),
        ("isom:0.5,0.1|ann:0.5", 5),
    ],
)
def test_domain_errors_report_position(text, position):
    with pytest.raises(DomainSpecError) as exc:
        parse_domain(text)
    assert exc.value.position == position


def test_missing_isometry_target():
    with pytest.raises(DomainSpecError):
        parse_domain("isom:0.5,0,0")
    with pytest.raises(DomainSpecError):
        parse_domain("")


def test_parse_corpus_file():
    text = "# corpus\ndisk:0,0,1\n\next:2   # exterior\n"
    assert parse_corpus(text) == [EuclideanDisk(0j, 1.0), ExteriorDisk(2.0)]
    with pytest.raises(DomainSpecError) as exc:
        parse_corpus("disk:0,0,1\nfoo:1\n")
    assert "line 2" in str(exc.value)


def test_points_csv():
    E = parse_points_csv("re,im\n0,0\n1,0.5\ninf\n", label="pts")
    assert E.points == (0j, 1 + 0.5j)
    assert E.contains_infinity and E.label == "pts"
    assert parse_points_csv(format_points_csv(E)).points == E.points


def test_points_csv_errors():
    with pytest.raises(PointFormatError):
        parse_points_csv("0,0\ninf\ninf\n")
    with pytest.raises(PointFormatError):
        parse_points_csv("0,0\n1,x\n")
    with pytest.raises(PointFormatError):
        parse_points_csv("0,0,0\n")


def test_generators():
    assert parse_generator("cantor:3").label == "cantor:3"
    E = parse_generator("geom:2,quadratic,4")
    assert len(E.points) == 6
    assert min(abs(p) for p in E.points) == 0.0
    assert max(abs(p) for p in E.points) == pytest.approx(1.0)
    assert not math.isinf(E.diameter)


@pytest.mark.parametrize("text", ["cantor", "cantor:x", "geom:2,linear", "geom:2,cubic,4", "spiral:3"])
def test_generator_errors(text):
    with pytest.raises(ParseError):
        parse_generator(text)


def test_generator_level_range():
    with pytest.raises(LevelOutOfRange):
        parse_generator("cantor:25")
