"""Schema-validated wrappers for the JSON documents comsr reads and writes

Archives, code sets and run reports are plain JSON. Each document kind is a
:class:`SchemaBase` subclass carrying a draft-07 schema; instances validate
on construction, on ``to_dict`` and on ``from_dict``, so a tampered or
truncated file is reported with the path of the offending value.
"""
import collections
import contextlib
import json
import typing

import jsonschema
from referencing import Registry
from referencing.exceptions import Unresolvable
from referencing.jsonschema import DRAFT7

# If ENABLE_VALIDATION_AT_INSTANTIATION is True, documents are converted to
# dict and validated when they are created. Reading large archives is faster
# with it off; from_dict still validates the raw input once.
ENABLE_VALIDATION_AT_INSTANTIATION = True

VALIDATOR = jsonschema.Draft7Validator

# the root schema is registered under this URI; local references resolve against it
ROOT_URI = 'urn:comsr:documents'


@contextlib.contextmanager
def debug_mode(arg):
    global ENABLE_VALIDATION_AT_INSTANTIATION
    original = ENABLE_VALIDATION_AT_INSTANTIATION
    ENABLE_VALIDATION_AT_INSTANTIATION = arg
    try:
        yield
    finally:
        ENABLE_VALIDATION_AT_INSTANTIATION = original


def schema_registry(rootschema) -> Registry:
    """A registry holding ``rootschema`` under :data:`ROOT_URI`"""
    return Registry().with_resource(ROOT_URI, DRAFT7.create_resource(rootschema))


def resolve_references(schema, rootschema=None):
    """Follow ``$ref`` pointers, relative to ``rootschema``, to the schema they name"""
    resolver = schema_registry(rootschema or schema).resolver(base_uri=ROOT_URI)
    while '$ref' in schema:
        try:
            resolved = resolver.lookup(schema['$ref'])
        except Unresolvable as err:
            raise ValueError("unresolvable reference {!r}".format(schema['$ref'])) from err
        schema, resolver = resolved.contents, resolved.resolver
    return schema


class SchemaValidationError(jsonschema.ValidationError):
    """A wrapper for jsonschema.ValidationError naming the document class"""

    def __init__(self, obj, err):
        super(SchemaValidationError, self).__init__(**self._get_contents(err))
        self._err = err
        self.obj = obj
        self.message = err.message

    @staticmethod
    def _get_contents(err):
        """Get a dictionary with the contents of a ValidationError"""
        return err._contents()

    def __str__(self):
        cls = self.obj if isinstance(self.obj, type) else self.obj.__class__
        path = ['{}.{}'.format(cls.__module__, cls.__name__)]
        path.extend(str(part) for part in self.absolute_path)
        return "Invalid document\n\n        {}, validating {!r}\n\n        {}\n        ".format(
            '->'.join(path), self.validator, self.message)


class UndefinedType(object):
    """A singleton object for marking undefined attributes"""
    __instance = None

    def __new__(cls, *args, **kwargs):
        if not isinstance(cls.__instance, cls):
            cls.__instance = object.__new__(cls, *args, **kwargs)
        return cls.__instance

    def __repr__(self):
        return 'Undefined'


Undefined = UndefinedType()


class SchemaBase(object):
    """Base class for document wrappers.

    Each derived class sets the _schema class attribute (and optionally the
    _rootschema class attribute holding the definitions) used for validation.
    Documents are JSON objects, so properties are passed by keyword.
    """
    _schema = None
    _rootschema = None
    _property_names = None

    def __init__(self, **kwds):
        if self._schema is None:
            raise ValueError("Cannot instantiate object of type {}: "
                             "_schema class attribute is not defined."
                             "".format(self.__class__))
        object.__setattr__(self, '_kwds', kwds)

        if ENABLE_VALIDATION_AT_INSTANTIATION:
            self.to_dict(validate=True)

    def __getattr__(self, attr):
        # only reached when normal lookup fails
        kwds = self.__dict__.get('_kwds', {})
        if attr in kwds:
            return kwds[attr]
        raise AttributeError("{!r} object has no attribute {!r}"
                             "".format(self.__class__.__name__, attr))

    def __setattr__(self, item, val):
        if self._property_names is not None and item in self._property_names:
            self._kwds[item] = val
        else:
            super().__setattr__(item, val)

    def __getitem__(self, item):
        return self._kwds[item]

    def get(self, item, default=None):
        value = self._kwds.get(item, Undefined)
        return default if value is Undefined else value

    def __repr__(self):
        args = ("{}: {!r}".format(key, val)
                for key, val in sorted(self._kwds.items())
                if val is not Undefined)
        args = '\n' + ',\n'.join(args)
        return "{0}({{{1}\n}})".format(self.__class__.__name__,
                                       args.replace('\n', '\n  '))

    def __eq__(self, other):
        return type(self) is type(other) and self._kwds == other._kwds

    def to_dict(self, validate=True):
        """Return the JSON-compatible dict for this document

        Raises
        ------
        SchemaValidationError :
            if validate=True and the result does not conform to the schema
        """
        def _todict(val):
            if isinstance(val, SchemaBase):
                return val.to_dict(validate=False)
            elif isinstance(val, str):
                return val
            elif isinstance(val, typing.Sequence):
                return [_todict(v) for v in val]
            elif isinstance(val, typing.Mapping):
                return {k: _todict(v) for k, v in val.items()
                        if v is not Undefined}
            else:
                return val

        result = _todict(self._kwds)
        if validate:
            try:
                self.validate(result)
            except jsonschema.ValidationError as err:
                raise SchemaValidationError(self, err)
        return result

    def to_json(self, validate=True, indent=2, sort_keys=True, **kwargs):
        """Emit the JSON representation for this document as a string"""
        return json.dumps(self.to_dict(validate=validate), indent=indent,
                          sort_keys=sort_keys, **kwargs)

    @classmethod
    def _default_wrapper_classes(cls):
        """Return the set of classes used within cls.from_dict()"""
        return SchemaBase.__subclasses__()

    @classmethod
    def from_dict(cls, dct, validate=True, _wrapper_classes=None):
        """Construct the document, and any nested documents, from a dict

        Raises
        ------
        SchemaValidationError :
            if validate=True and dct does not conform to the schema
        """
        if validate:
            try:
                cls.validate(dct)
            except jsonschema.ValidationError as err:
                raise SchemaValidationError(cls, err)
        if _wrapper_classes is None:
            _wrapper_classes = cls._default_wrapper_classes()
        converter = _FromDict(_wrapper_classes)
        with debug_mode(False):
            return converter.from_dict(constructor=cls, root=cls,
                                       schema=cls._schema, dct=dct)

    @classmethod
    def from_json(cls, json_string, validate=True, **kwargs):
        return cls.from_dict(json.loads(json_string, **kwargs), validate=validate)

    @classmethod
    def _root_validator(cls):
        # built once per class; subschemas are checked by evolving it
        if '_validator' not in cls.__dict__:
            rootschema = cls._rootschema or cls._schema
            cls._validator = VALIDATOR(rootschema, registry=schema_registry(rootschema))
        return cls._validator

    @classmethod
    def validate(cls, instance, schema=None):
        """
        Validate the instance against the class schema in the context of the
        rootschema.
        """
        validator = cls._root_validator().evolve(schema=schema or cls._schema)
        error = jsonschema.exceptions.best_match(validator.iter_errors(instance))
        if error is not None:
            raise error

    @classmethod
    def resolve_references(cls, schema):
        """Resolve references of the schema the context of this object's schema"""
        return resolve_references(schema, cls._rootschema or cls._schema)


class _FromDict(object):
    """Class used to construct SchemaBase class hierarchies from a dict

    Builds a hash table mapping schemas to their wrapper classes, so nested
    values whose schema matches a wrapper class are wrapped in it.
    """
    _hash_exclude_keys = ('definitions', 'title', 'description', '$schema', 'id')

    def __init__(self, class_list):
        self.class_dict = collections.defaultdict(list)
        for cls in class_list:
            if cls._schema is not None:
                self.class_dict[self.hash_schema(cls._schema)].append(cls)

    @classmethod
    def hash_schema(cls, schema):
        if cls._hash_exclude_keys:
            schema = {key: val for key, val in schema.items()
                      if key not in cls._hash_exclude_keys}
        return hash(json.dumps(schema, sort_keys=True))

    @staticmethod
    def _passthrough(*args, **kwds):
        """An object constructor that simply passes arguments through"""
        if not args:
            return kwds
        elif args and not kwds:
            assert len(args) == 1
            return args[0]
        else:
            raise ValueError("Both args and kwds supplied")

    def from_dict(self, constructor, root, schema, dct):
        """Construct an object from a dict representation"""
        schema = root.resolve_references(schema)

        def _get_constructor(schema):
            matches = self.class_dict[self.hash_schema(schema)]
            constructor = matches[-1] if matches else self._passthrough
            return constructor, root.resolve_references(schema)

        if isinstance(dct, typing.Mapping):
            props = schema.get('properties', {})
            kwds = {}
            for key, val in dct.items():
                if key in props:
                    prop_constructor, prop_schema = _get_constructor(props[key])
                    val = self.from_dict(prop_constructor, root, prop_schema, val)
                kwds[key] = val
            return constructor(**kwds)

        elif isinstance(dct, typing.Sequence) and not isinstance(dct, str):
            if 'items' in schema and isinstance(schema['items'], typing.Mapping):
                item_constructor, item_schema = _get_constructor(schema['items'])
            else:
                item_schema = {}
                item_constructor = self._passthrough
            return [self.from_dict(item_constructor, root, item_schema, val)
                    for val in dct]
        else:
            return dct
