"""Scoring rubric and question checklist used as prompt payload and UI help text."""

from __future__ import annotations

from ..model import DIMENSION_LABELS, SCORE_DIMENSIONS

# Per-dimension 0..5 anchors for rating interleaved image-text answers.
DIMENSION_RUBRICS: dict[str, dict] = {
    "tcc": {
        "label": DIMENSION_LABELS["tcc"],
        "intro": (
            "This dimension only focuses on the correspondence between the text response "
            "and the question, whether the content precisely matches the user's needs, and "
            "whether the information is complete and error-free. It does not consider the "
            "output of any other dimensions and evaluation criteria."
        ),
        "anchors": {
            0: "No text appears;",
            1: (
                "The text answer has nothing to do with the question; it is completely wrong, "
                "completely divorced from the question, and there is no positive response to the "
                "text requirement; there is less content but there are truncations and random "
                "spitting characters."
            ),
            2: (
                "The text answer can only cover a small part of the elements required in the "
                "question, and there is a large amount of unreasonable content; there is a very "
                "obvious phenomenon of text truncation that seriously affects the original "
                "information; the content is very long or very short, which seriously affects "
                "the reading."
            ),
            3: (
                "The answer can correspond to key elements, there is a small amount of "
                "unreasonable content, and there may be omissions of key information; the "
                "content is too long or too short, but the information basically corresponds."
            ),
            4: (
                "The required elements of the question are basically all corresponding, there is "
                "no unreasonable content, there is a omission of key information, or the answer "
                "is awkward; the content is slightly longer or shorter, but the answer is very "
                "correct."
            ),
            5: (
                "The content of the answer exactly corresponds to the question, there is no "
                "unreasonable content, and the answer is smooth and fluent, with full content."
            ),
        },
    },
    "icc": {
        "label": DIMENSION_LABELS["icc"],
        "intro": (
            "This dimension only focuses on the correspondence between the image content and "
            "the question (considering the content of the picture, the degree to which the "
            "image content answers the question). Whether the key parts are retained, and "
            "whether there is an obvious lack of objects."
        ),
        "anchors": {
            0: "No image appears;",
            1: (
                "The content of the image is completely wrong, and no key elements are depicted "
                "at all; the image has no connection to the problem, even if the image itself is "
                "of good quality."
            ),
            2: (
                "About half of the key elements required for the problem are missing, and there "
                "are a large number of unreasonable elements; the elements in the figure may "
                "have some connection to the problem, but it is almost impossible to identify "
                "what they are."
            ),
            3: (
                "Only a small number of key elements required for the problem are missing in the "
                "figure, most of the elements can be fully identified, and there are only a few "
                "unreasonable content."
            ),
            4: (
                "Basically lack the elements required for the problem, and there may be minor "
                "flaws in some details."
            ),
            5: (
                "All the elements required for the question are completely corresponding, the "
                "main body is intact, and the picture content answers the question very well."
            ),
        },
    },
    "iq": {
        "label": DIMENSION_LABELS["iq"],
        "intro": (
            "This dimension only focuses on the performance of the basic generation technology "
            "of the image (do not consider the content of the picture). Whether it is clear, "
            "whether there are blurred, noisy or out-of-focus areas, truncations or damages "
            "(that is, the judgment of image aesthetics and subjective quality)."
        ),
        "anchors": {
            0: "No picture;",
            1: "The image is very ugly, and it is almost impossible to identify the image content.",
            2: "The image looks ugly, the overall image is blurred but can be barely recognized;",
            3: (
                "The image is medium in appearance, and the main elements can be distinguished, "
                "but other elements are blurred."
            ),
            4: (
                "The image looks good, the picture is relatively clear, and there is no visible "
                "blurring phenomenon;"
            ),
            5: (
                "The image looks good, the details are sharp without blur, and the image quality "
                "is very high."
            ),
        },
    },
    "its": {
        "label": DIMENSION_LABELS["its"],
        "intro": (
            "This dimension evaluates the degree of alignment and complementarity between the "
            "textual and visual components of a response. It focuses not only on how well the "
            "entities or scenes described in the text are accurately and completely depicted in "
            "the image, but also on whether the text and image together form a coherent and "
            "mutually supportive answer to the question."
        ),
        "anchors": {
            0: (
                "The image and text are completely unrelated. Additionally, if either the image "
                "or the text is missing (i.e., “null”), the response is assigned 0 points."
            ),
            1: (
                "The image and text are minimally related, with only a few elements weakly "
                "corresponding. The response lacks coherence and fails to effectively address "
                "the question."
            ),
            2: (
                "Around half of the key elements described in the text are reflected in the "
                "image, but significant mismatches remain. The overall synergy is poor."
            ),
            3: (
                "Most elements between the text and image are consistent, but a few important "
                "mismatches or omissions in key entities or scenes reduce the completeness of "
                "the response."
            ),
            4: (
                "Nearly all elements between the text and image are consistent, with only minor "
                "mismatches in non-critical details. The response answers the question well, but "
                "there may be redundancy between the two modalities, limiting their "
                "complementarity."
            ),
            5: (
                "The text and image are perfectly aligned, with all described elements "
                "accurately and fully presented. The two modalities work together in a "
                "complementary way to form a complete and informative response without "
                "unnecessary duplication."
            ),
        },
    },
}


def rubric_text() -> str:
    """Render the four rubric blocks as the text inlined into the judge prompt."""
    blocks = []
    for dim in SCORE_DIMENSIONS:
        spec = DIMENSION_RUBRICS[dim]
        lines = [f"{spec['label']} (0-5 points): {spec['intro']}"]
        for score in range(6):
            unit = "points" if score != 1 else "point"
            lines.append(f"{score} {unit}: {spec['anchors'][score]}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


# Checklist applied when reviewing generated questions by hand; each entry pairs
# a criterion name with its guidance text.
QUESTION_QUALITY_CHECKLIST: tuple[tuple[str, str], ...] = (
    (
        "Reasonableness of Expression",
        "The question statement is smooth, without any grammatical errors, and the words are "
        "used accurately and appropriately.",
    ),
    (
        "Clarity of Requirements",
        "Clearly indicate that the model is required to provide both text and image responses "
        "simultaneously.",
    ),
    (
        "Focus of the Theme",
        "The question revolves around a single and clear theme and will not jump between "
        "multiple unrelated themes.",
    ),
    (
        "Feasibility and Clarity",
        "Based on common sense judgment, the content involved in the question is something that "
        "the model has the ability to answer through language and images, and there is no way "
        "of multiple interpretations, and the model can accurately grasp the questioner's "
        "intention.",
    ),
    (
        "Appropriateness of Length",
        "The length of the question is moderate, which not only contains enough key information "
        "to guide the model to generate high quality answers but also is not too long and "
        "complicated for the model to grasp the key points. Usually, about 15 - 50 words is "
        "more appropriate.",
    ),
)
