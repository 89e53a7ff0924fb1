"""aged: frame semantic role labeling with definition templates and span pointers.

Frame and frame-element definitions are rendered into slot-bearing templates,
a small trainable encoder contextualizes sentence/template pairs, and two
pointer heads extract one argument span (or no argument) per slot.
"""

__version__ = "0.1.0"
