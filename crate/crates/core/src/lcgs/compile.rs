//! Relabelling, name resolution and range checking.

use std::collections::{HashMap, HashSet};

use super::ast::{self, LcgsAst, TemplateDecl};
use super::compiled::{Action, CompiledGame, Label, Player, Variable};
use crate::error::LcgsError;
use crate::expr::{EvalContext, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Member {
    Var(usize),
    Label(usize),
    Action(usize),
}

struct Instance<'a> {
    name: &'a str,
    template: &'a TemplateDecl,
    relabel: HashMap<&'a str, &'a ast::Expr>,
    /// Public member names (after relabelling) of this player.
    members: HashMap<String, Member>,
    /// Declarations renamed by the relabelling, keyed by their new name.
    renamed: HashMap<String, Member>,
    /// Original template names of declarations.
    local: HashMap<&'a str, Member>,
    first_slot: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Scope {
    /// Inside the template body of a player.
    Template(usize),
    /// Inside an expression substituted by a player's relabelling.
    Substituted(usize),
    /// Constant definitions.
    Global,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Usage {
    Constant,
    Condition,
    Update,
}

struct Resolver<'a> {
    ast: &'a LcgsAst,
    consts: HashMap<&'a str, &'a ast::Expr>,
    const_values: HashMap<&'a str, i64>,
    const_stack: Vec<&'a str>,
    players: HashMap<&'a str, usize>,
    instances: Vec<Instance<'a>>,
    labels: HashMap<(usize, usize), Expr>,
    label_stack: Vec<(usize, usize)>,
}

/// Resolve and instantiate a parsed program into a game.
///
/// Every `player` declaration becomes one player; its template body is copied with the
/// relabelling applied, identifiers are bound to state slots, labels, action indicators
/// or constants, and constants are folded. Templates without instances contribute nothing.
pub fn resolve_and_instantiate(ast: &LcgsAst) -> Result<CompiledGame, LcgsError> {
    let mut resolver = Resolver::new(ast)?;
    let game = resolver.build()?;
    check_ranges(game)
}

/// Check initial values against declared ranges.
///
/// Conditions are not rejected for being integer valued: any nonzero integer counts as true.
pub fn check_ranges(game: CompiledGame) -> Result<CompiledGame, LcgsError> {
    for v in &game.variables {
        if v.lo > v.hi {
            return Err(LcgsError::EmptyRange {
                name: v.name.clone(),
                lo: v.lo,
                hi: v.hi,
            });
        }
        if v.init < v.lo || v.init > v.hi {
            return Err(LcgsError::InitOutOfRange {
                name: v.name.clone(),
                value: v.init,
                lo: v.lo,
                hi: v.hi,
            });
        }
    }
    Ok(game)
}

fn duplicate(name: &str, scope: Option<String>) -> LcgsError {
    LcgsError::Duplicate {
        name: name.to_string(),
        scope,
    }
}

impl<'a> Resolver<'a> {
    fn new(ast: &'a LcgsAst) -> Result<Self, LcgsError> {
        let mut consts = HashMap::new();
        for c in &ast.consts {
            if consts.insert(c.name.as_str(), &c.value).is_some() {
                return Err(duplicate(&c.name, None));
            }
        }
        let mut templates = HashSet::new();
        for t in &ast.templates {
            if !templates.insert(t.name.as_str()) {
                return Err(duplicate(&t.name, None));
            }
        }
        let mut players = HashMap::new();
        for (i, p) in ast.players.iter().enumerate() {
            if consts.contains_key(p.name.as_str()) || players.insert(p.name.as_str(), i).is_some()
            {
                return Err(duplicate(&p.name, None));
            }
        }
        if ast.players.is_empty() {
            return Err(LcgsError::NoPlayers);
        }

        let mut instances = Vec::with_capacity(ast.players.len());
        let mut next_slot = 0;
        for p in &ast.players {
            let template = ast
                .template(&p.template)
                .ok_or_else(|| LcgsError::UnknownTemplate {
                    player: p.name.clone(),
                    template: p.template.clone(),
                })?;
            let scope = Some(format!("player `{}`", p.name));

            let mut relabel = HashMap::new();
            for (from, to) in &p.relabelling {
                if relabel.insert(from.as_str(), to).is_some() {
                    return Err(LcgsError::InvalidRelabelling {
                        player: p.name.clone(),
                        reason: format!("`{from}` is relabelled twice"),
                    });
                }
            }

            let mut local = HashMap::new();
            let decls = template
                .vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.name.as_str(), Member::Var(next_slot + i)))
                .chain(
                    template
                        .labels
                        .iter()
                        .enumerate()
                        .map(|(i, l)| (l.name.as_str(), Member::Label(i))),
                )
                .chain(
                    template
                        .actions
                        .iter()
                        .enumerate()
                        .map(|(i, a)| (a.name.as_str(), Member::Action(i))),
                );
            let mut members = HashMap::new();
            let mut renamed = HashMap::new();
            for (name, member) in decls {
                if local.insert(name, member).is_some() {
                    return Err(duplicate(name, Some(format!("template `{}`", template.name))));
                }
                let public = match relabel.get(name) {
                    None => name.to_string(),
                    Some(ast::Expr::Ident(new)) => {
                        renamed.insert(new.clone(), member);
                        new.clone()
                    }
                    Some(other) => {
                        return Err(LcgsError::InvalidRelabelling {
                            player: p.name.clone(),
                            reason: format!(
                                "declaration `{name}` can only be renamed to an identifier, not `{other}`"
                            ),
                        })
                    }
                };
                if members.insert(public.clone(), member).is_some() {
                    return Err(duplicate(&public, scope.clone()));
                }
            }

            instances.push(Instance {
                name: &p.name,
                template,
                relabel,
                members,
                renamed,
                local,
                first_slot: next_slot,
            });
            next_slot += template.vars.len();
        }

        Ok(Resolver {
            ast,
            consts,
            const_values: HashMap::new(),
            const_stack: Vec::new(),
            players,
            instances,
            labels: HashMap::new(),
            label_stack: Vec::new(),
        })
    }

    fn build(&mut self) -> Result<CompiledGame, LcgsError> {
        for c in &self.ast.consts {
            self.constant(&c.name)?;
        }

        let mut players = Vec::new();
        let mut variables = Vec::new();
        let mut labels = Vec::new();

        for p in 0..self.instances.len() {
            let template = self.instances[p].template;
            let player_name = self.instances[p].name.to_string();
            let public_name = |original: &str, inst: &Instance<'_>| match inst.relabel.get(original) {
                Some(ast::Expr::Ident(new)) => new.clone(),
                _ => original.to_string(),
            };

            for (i, var) in template.vars.iter().enumerate() {
                let name = format!("{player_name}.{}", public_name(&var.name, &self.instances[p]));
                let lo = self.constant_expr(&var.lo, p, &name)?;
                let hi = self.constant_expr(&var.hi, p, &name)?;
                let init = self.constant_expr(&var.init, p, &name)?;
                let updates: Vec<_> = template
                    .updates
                    .iter()
                    .filter(|u| u.name == var.name)
                    .collect();
                if updates.len() != 1 {
                    return Err(LcgsError::UpdateCount {
                        name,
                        count: updates.len(),
                    });
                }
                let update = self.resolve(&updates[0].value, Scope::Template(p), Usage::Update)?;
                debug_assert_eq!(self.instances[p].first_slot + i, variables.len());
                variables.push(Variable {
                    name,
                    player: p,
                    lo,
                    hi,
                    init,
                    update: simplify(update),
                });
            }
            for u in &template.updates {
                if !template.vars.iter().any(|v| v.name == u.name) {
                    return Err(LcgsError::Undefined {
                        name: format!("{}'", u.name),
                        scope: Some(format!("template `{}`", template.name)),
                    });
                }
            }

            for (i, label) in template.labels.iter().enumerate() {
                let condition = self.label(p, i)?;
                labels.push(Label {
                    name: format!("{player_name}.{}", public_name(&label.name, &self.instances[p])),
                    player: p,
                    condition,
                });
            }

            let mut actions = Vec::new();
            for action in &template.actions {
                let available = self.resolve(&action.available, Scope::Template(p), Usage::Condition)?;
                actions.push(Action {
                    name: public_name(&action.name, &self.instances[p]),
                    available: simplify(available),
                });
            }
            players.push(Player {
                name: player_name,
                actions,
            });
        }

        Ok(CompiledGame::new(players, variables, labels))
    }

    fn constant(&mut self, name: &'a str) -> Result<i64, LcgsError> {
        if let Some(v) = self.const_values.get(name) {
            return Ok(*v);
        }
        if self.const_stack.contains(&name) {
            return Err(LcgsError::Circular(name.to_string()));
        }
        let definition = self.consts[name];
        self.const_stack.push(name);
        let resolved = self.resolve(definition, Scope::Global, Usage::Constant)?;
        self.const_stack.pop();
        let value = resolved.eval(&EvalContext::state(&[]))?;
        self.const_values.insert(name, value);
        Ok(value)
    }

    fn constant_expr(&mut self, e: &'a ast::Expr, player: usize, what: &str) -> Result<i64, LcgsError> {
        let resolved = self.resolve(e, Scope::Template(player), Usage::Constant)?;
        if !resolved.is_constant() {
            return Err(LcgsError::NotConstant {
                player: self.instances[player].name.to_string(),
                name: what.to_string(),
            });
        }
        Ok(resolved.eval(&EvalContext::state(&[]))?)
    }

    fn label(&mut self, player: usize, index: usize) -> Result<Expr, LcgsError> {
        if let Some(e) = self.labels.get(&(player, index)) {
            return Ok(e.clone());
        }
        let decl = &self.instances[player].template.labels[index];
        if self.label_stack.contains(&(player, index)) {
            return Err(LcgsError::Circular(format!(
                "{}.{}",
                self.instances[player].name, decl.name
            )));
        }
        self.label_stack.push((player, index));
        let resolved = self.resolve(&decl.condition, Scope::Template(player), Usage::Condition);
        self.label_stack.pop();
        let resolved = simplify(resolved?);
        self.labels.insert((player, index), resolved.clone());
        Ok(resolved)
    }

    fn member_expr(
        &mut self,
        player: usize,
        member: Member,
        display: &str,
        usage: Usage,
        qualified: bool,
    ) -> Result<Expr, LcgsError> {
        match member {
            Member::Var(slot) => Ok(Expr::Var(slot)),
            Member::Label(i) => self.label(player, i),
            Member::Action(action) => {
                if !qualified {
                    return Err(LcgsError::TypeMismatch(format!(
                        "action `{display}` must be referenced through its player, as `<player>.{display}`"
                    )));
                }
                if usage != Usage::Update {
                    return Err(LcgsError::MisplacedAction(display.to_string()));
                }
                Ok(Expr::ActionTaken { player, action })
            }
        }
    }

    fn scope_name(&self, scope: Scope) -> Option<String> {
        match scope {
            Scope::Template(p) | Scope::Substituted(p) => {
                Some(format!("player `{}`", self.instances[p].name))
            }
            Scope::Global => None,
        }
    }

    /// Resolve the owner part of `owner.member` to a player index.
    fn qualifier(&self, owner: &str, scope: Scope) -> Result<usize, LcgsError> {
        if let Scope::Template(p) = scope {
            if let Some(replacement) = self.instances[p].relabel.get(owner) {
                return match replacement {
                    ast::Expr::Ident(name) => self.qualifier(name, Scope::Substituted(p)),
                    other => Err(LcgsError::InvalidRelabelling {
                        player: self.instances[p].name.to_string(),
                        reason: format!("`{owner}` is used as a player but relabelled to `{other}`"),
                    }),
                };
            }
        }
        self.players
            .get(owner)
            .copied()
            .ok_or_else(|| LcgsError::Undefined {
                name: owner.to_string(),
                scope: self.scope_name(scope),
            })
    }

    fn resolve(&mut self, e: &'a ast::Expr, scope: Scope, usage: Usage) -> Result<Expr, LcgsError> {
        Ok(match e {
            ast::Expr::Int(v) => Expr::Const(*v),
            ast::Expr::Ident(name) => self.identifier(name, scope, usage)?,
            ast::Expr::Qualified(owner, member) => {
                if usage == Usage::Constant && scope == Scope::Global {
                    return Err(LcgsError::TypeMismatch(format!(
                        "`{owner}.{member}` is not a constant"
                    )));
                }
                let player = self.qualifier(owner, scope)?;
                let found = self.instances[player].members.get(member.as_str()).copied();
                match found {
                    Some(m) => self.member_expr(player, m, member, usage, true)?,
                    None => {
                        return Err(LcgsError::Undefined {
                            name: format!("{}.{member}", self.instances[player].name),
                            scope: self.scope_name(scope),
                        })
                    }
                }
            }
            ast::Expr::Unary(op, inner) => {
                Expr::Unary(*op, Box::new(self.resolve(inner, scope, usage)?))
            }
            ast::Expr::Binary(op, l, r) => Expr::binary(
                *op,
                self.resolve(l, scope, usage)?,
                self.resolve(r, scope, usage)?,
            ),
            ast::Expr::Call(f, args) => Expr::Call(
                *f,
                args.iter()
                    .map(|a| self.resolve(a, scope, usage))
                    .collect::<Result<_, _>>()?,
            ),
        })
    }

    fn identifier(&mut self, name: &'a str, scope: Scope, usage: Usage) -> Result<Expr, LcgsError> {
        match scope {
            Scope::Template(p) => {
                if let Some(replacement) = self.instances[p].relabel.get(name).copied() {
                    return self.resolve(replacement, Scope::Substituted(p), usage);
                }
                if let Some(member) = self.instances[p].local.get(name).copied() {
                    return self.member_expr(p, member, name, usage, false);
                }
            }
            Scope::Substituted(p) => {
                if let Some(member) = self.instances[p].renamed.get(name).copied() {
                    return self.member_expr(p, member, name, usage, false);
                }
            }
            Scope::Global => {}
        }
        if self.consts.contains_key(name) {
            return Ok(Expr::Const(self.constant(name)?));
        }
        if self.players.contains_key(name) {
            return Err(LcgsError::TypeMismatch(format!(
                "player `{name}` used where a value is expected"
            )));
        }
        Err(LcgsError::Undefined {
            name: name.to_string(),
            scope: self.scope_name(scope),
        })
    }
}

/// Fold constant subexpressions. Division by zero is left in place for run time.
pub fn simplify(e: Expr) -> Expr {
    let folded = match e {
        Expr::Unary(op, inner) => Expr::Unary(op, Box::new(simplify(*inner))),
        Expr::Binary(op, l, r) => Expr::binary(op, simplify(*l), simplify(*r)),
        Expr::Call(f, args) => Expr::Call(f, args.into_iter().map(simplify).collect()),
        other => other,
    };
    if folded.is_constant() && !matches!(folded, Expr::Const(_)) {
        if let Ok(v) = folded.eval(&EvalContext::state(&[])) {
            return Expr::Const(v);
        }
    }
    folded
}

/// Substitute global constants and fold literal arithmetic throughout the syntax tree.
///
/// Identifiers that a template declares, or that some player relabels, are left alone.
pub fn fold_constants(ast: &LcgsAst) -> LcgsAst {
    let mut values: HashMap<String, i64> = HashMap::new();
    // Constants may refer to constants declared later; iterate until nothing changes.
    loop {
        let before = values.len();
        for c in &ast.consts {
            if values.contains_key(&c.name) {
                continue;
            }
            if let ast::Expr::Int(v) = fold_expr(&c.value, &values, &HashSet::new()) {
                values.insert(c.name.clone(), v);
            }
        }
        if values.len() == before {
            break;
        }
    }

    let none = HashSet::new();
    let mut out = ast.clone();
    for c in &mut out.consts {
        c.value = fold_expr(&c.value, &values, &none);
    }
    for t in &mut out.templates {
        let mut shadowed: HashSet<String> = t
            .vars
            .iter()
            .map(|v| v.name.clone())
            .chain(t.labels.iter().map(|l| l.name.clone()))
            .chain(t.actions.iter().map(|a| a.name.clone()))
            .collect();
        for p in ast.players.iter().filter(|p| p.template == t.name) {
            shadowed.extend(p.relabelling.iter().map(|(from, _)| from.clone()));
        }
        for v in &mut t.vars {
            v.lo = fold_expr(&v.lo, &values, &shadowed);
            v.hi = fold_expr(&v.hi, &values, &shadowed);
            v.init = fold_expr(&v.init, &values, &shadowed);
        }
        for u in &mut t.updates {
            u.value = fold_expr(&u.value, &values, &shadowed);
        }
        for l in &mut t.labels {
            l.condition = fold_expr(&l.condition, &values, &shadowed);
        }
        for a in &mut t.actions {
            a.available = fold_expr(&a.available, &values, &shadowed);
        }
    }
    for p in &mut out.players {
        for (_, to) in &mut p.relabelling {
            *to = fold_expr(to, &values, &none);
        }
    }
    out
}

fn fold_expr(e: &ast::Expr, consts: &HashMap<String, i64>, shadowed: &HashSet<String>) -> ast::Expr {
    use ast::Expr as A;
    let folded = match e {
        A::Ident(name) if !shadowed.contains(name) => match consts.get(name) {
            Some(v) => A::Int(*v),
            None => e.clone(),
        },
        A::Int(_) | A::Ident(_) | A::Qualified(..) => e.clone(),
        A::Unary(op, inner) => A::Unary(*op, Box::new(fold_expr(inner, consts, shadowed))),
        A::Binary(op, l, r) => A::binary(
            *op,
            fold_expr(l, consts, shadowed),
            fold_expr(r, consts, shadowed),
        ),
        A::Call(f, args) => A::Call(
            *f,
            args.iter().map(|a| fold_expr(a, consts, shadowed)).collect(),
        ),
    };
    let literal = |e: &A| match e {
        A::Int(v) => Some(Expr::Const(*v)),
        _ => None,
    };
    let lowered = match &folded {
        A::Unary(op, inner) => literal(inner).map(|i| Expr::Unary(*op, Box::new(i))),
        A::Binary(op, l, r) => literal(l)
            .zip(literal(r))
            .map(|(l, r)| Expr::binary(*op, l, r)),
        A::Call(f, args) => args
            .iter()
            .map(literal)
            .collect::<Option<Vec<_>>>()
            .map(|args| Expr::Call(*f, args)),
        _ => None,
    };
    match lowered.map(|e| e.eval(&EvalContext::state(&[]))) {
        Some(Ok(v)) => A::Int(v),
        _ => folded,
    }
}
