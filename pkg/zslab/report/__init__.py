# coding: utf-8

from .base import BaseReport, TextReport, JsonReport, format_value


def new_report(style=None, **kwargs):
    if style == TextReport.STYLE or style is None:
        return TextReport(**kwargs)
    elif style == JsonReport.STYLE:
        return JsonReport(**kwargs)
    else:
        raise ValueError(f"Unsupported report with style {style}")
