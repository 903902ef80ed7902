// Tiny element factory; enough for this studio, no framework.

type Props = Partial<{
  className: string;
  textContent: string;
  type: string;
  value: string;
  min: string;
  max: string;
  step: string;
  placeholder: string;
  title: string;
  href: string;
  htmlFor: string;
  checked: boolean;
  disabled: boolean;
  readOnly: boolean;
  selected: boolean;
  multiple: boolean;
  size: number;
  rows: number;
  cols: number;
}>;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  props: Props = {},
  children: (HTMLElement | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  Object.assign(node, props);
  for (const child of children) {
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}
