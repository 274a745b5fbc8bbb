"""JSON encodings of results; every ``*_to_json`` has a ``*_from_json`` inverse."""

from __future__ import annotations

from .derivation import FixedComponent
from .graded import GeneratorRecord, InvariantBasis, LaurentCertificate, RelationRecord, enumerate_piece
from .model import BlowupModel, PicClass, format_class, parse_class
from .polynomial import Polynomial


def class_to_json(d: PicClass, model: BlowupModel) -> dict:
    return {"expr": format_class(d, model), "vector": list(d.vector())}


def class_from_json(data: dict, model: BlowupModel) -> PicClass:
    d = PicClass.from_vector(data["vector"])
    if parse_class(data["expr"], model) != d:
        raise ValueError("class expression and vector disagree")
    return d


def poly_to_json(f: Polynomial, model: BlowupModel) -> dict:
    return {"text": model.fmt(f), "terms": f.to_json(model.names)}


def poly_from_json(data: dict, model: BlowupModel) -> Polynomial:
    return Polynomial.from_json(data["terms"], model.names, model.field)


def generator_to_json(g: GeneratorRecord, model: BlowupModel) -> dict:
    return {"index": g.index, "weight": g.weight, "class": class_to_json(g.cls, model),
            "polynomial": poly_to_json(g.polynomial, model)}


def generator_from_json(data: dict, model: BlowupModel) -> GeneratorRecord:
    return GeneratorRecord(poly_from_json(data["polynomial"], model), class_from_json(data["class"], model),
                           data["weight"], data["index"])


def relation_text(rel: RelationRecord, field) -> str:
    parts = []
    for k, (c, prod) in enumerate(rel.terms):
        neg = field.characteristic == 0 and c < 0
        mag = -c if neg else c
        body = "*".join(f"g{i}" for i in prod)
        text = body if mag == 1 else f"{mag}*{body}"
        if k == 0:
            parts.append(f"-{text}" if neg else text)
        else:
            parts.append(f"{'-' if neg else '+'} {text}")
    return " ".join(parts)


def relation_to_json(rel: RelationRecord, model: BlowupModel) -> dict:
    return {"index": rel.index, "weight": rel.weight, "class": class_to_json(rel.cls, model),
            "text": relation_text(rel, model.field),
            "terms": [[str(c), list(p)] for c, p in rel.terms]}


def relation_from_json(data: dict, model: BlowupModel) -> RelationRecord:
    terms = tuple((model.field.parse(c), tuple(p)) for c, p in data["terms"])
    return RelationRecord(terms, class_from_json(data["class"], model), data["weight"], data["index"])


def basis_to_json(basis: InvariantBasis, model: BlowupModel, with_basis: bool = True) -> dict:
    out = {"class": class_to_json(basis.cls, model), "weight": basis.piece.weight,
           "piece_dim": len(basis.piece), "invariant_dim": basis.dimension,
           "effective": basis.dimension > 0}
    if with_basis:
        out["basis"] = [poly_to_json(f, model) for f in basis.polynomials]
    return out


def basis_from_json(data: dict, model: BlowupModel) -> InvariantBasis:
    d = class_from_json(data["class"], model)
    piece = enumerate_piece(model, d)
    polys = tuple(poly_from_json(p, model) for p in data["basis"])
    vecs = tuple(tuple(f.coefficient_vector(piece.monomials)) for f in polys)
    return InvariantBasis(d, piece, vecs, polys)


def component_to_json(c: FixedComponent, model: BlowupModel) -> dict:
    return {"indices": [e + 1 for e in c.indices], "vanishing": c.labels(model)}


def component_from_json(data: dict) -> FixedComponent:
    return FixedComponent(tuple(e - 1 for e in data["indices"]))


def certificate_to_json(cert: LaurentCertificate, model: BlowupModel) -> dict:
    from .graded import difference_names

    names = model.names
    return {
        "normalizer": names[cert.normalizer],
        "laurent_form": cert.laurent_form.format(difference_names(model)),
        "multiplier": Polynomial.from_monomial(model.field, model.nvars, cert.multiplier).format(names),
        "terms": [[str(c), [[f"B{j + 1}", e] for j, e in alpha],
                   [[names[v], e] for v, e in xm]] for c, alpha, xm in cert.terms],
        "roundtrip_ok": cert.roundtrip_ok,
    }

